#pragma once

#include "gasval/calendar.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace gasval {

struct CurvePoint {
    YearMonth maturity;
    double price = 0.0;
};

/// Aligned daily history of spot fixes and futures curves.
/// Invariants: dates strictly increasing, every price positive, every curve
/// has at least two maturities sorted by delivery month.
struct PriceHistory {
    std::vector<Date> dates;
    std::vector<double> spot;
    std::vector<std::vector<CurvePoint>> curves;

    size_t size() const { return dates.size(); }
    void validate() const;

    // Price of a given delivery month at dates[i]; negative if not quoted.
    double price_at(size_t i, const YearMonth& maturity) const;
};

/// Futures expiry convention: contracts die on `expiry_day` of the delivery month.
struct RollConvention {
    int expiry_day = 1;

    Date expiry(const YearMonth& m) const { return Date{m.year, m.month, expiry_day}; }
};

// CSV schemas. spot: "date,price". curve: "date,maturity_month,price" with
// maturity_month formatted YYYY-MM. Headers required, C locale decimals.
PriceHistory load_price_history(const std::string& spot_csv_path,
                                const std::string& curve_csv_path);
PriceHistory load_price_history(std::istream& spot_csv, std::istream& curve_csv);

/// Spot, prompt and back futures on one observation date; x = (S-P)/P.
struct RollingPoint {
    Date date;
    double spot = 0.0;
    double prompt = 0.0;
    double back = 0.0;
    double x = 0.0;
    int prompt_index = -1; // index into the curve of that date
};

// The prompt at t is the earliest contract with expiry > t, so series roll on
// the expiry date itself.
std::vector<RollingPoint> rolling_series(const PriceHistory& h, const RollConvention& rc = {});

struct SpikeEvent {
    Date date;
    double relative_size = 0.0; // x_t
    bool positive = false;      // sign of x_t - mean(x)
};

struct SpikeDetection {
    std::vector<SpikeEvent> events;
    double mean = 0.0;
    double stddev = 0.0;
    double threshold_k = 0.0;
    // [month-1][0] = negative count, [month-1][1] = positive count
    std::array<std::array<int, 2>, 12> monthly_counts{};

    int total() const;
};

// Flags |x_t - mean(x)| > k * std(x).
SpikeDetection detect_spikes(const std::vector<RollingPoint>& series, double k = 3.0);

} // namespace gasval
