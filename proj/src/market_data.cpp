#include "gasval/market_data.hpp"

#include "gasval/errors.hpp"
#include "gasval/stats.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace gasval {

void PriceHistory::validate() const {
    GASVAL_REQUIRE(!dates.empty(), ErrorKind::empty_input, "price history is empty");
    GASVAL_REQUIRE(dates.size() == spot.size() && dates.size() == curves.size(),
                   ErrorKind::domain, "price history arrays misaligned");
    for (size_t i = 0; i < dates.size(); ++i) {
        if (i > 0)
            GASVAL_REQUIRE(dates[i - 1] < dates[i], ErrorKind::ordering,
                           "dates not strictly increasing at " << to_string(dates[i]));
        GASVAL_REQUIRE(spot[i] > 0.0, ErrorKind::domain,
                       "non-positive spot on " << to_string(dates[i]));
        const auto& curve = curves[i];
        GASVAL_REQUIRE(curve.size() >= 2, ErrorKind::insufficient_curve,
                       "curve on " << to_string(dates[i]) << " has fewer than two maturities");
        for (size_t j = 0; j < curve.size(); ++j) {
            GASVAL_REQUIRE(curve[j].price > 0.0, ErrorKind::domain,
                           "non-positive futures price on " << to_string(dates[i]));
            if (j > 0)
                GASVAL_REQUIRE(curve[j - 1].maturity < curve[j].maturity, ErrorKind::ordering,
                               "duplicate or unsorted maturity on " << to_string(dates[i]));
        }
        GASVAL_REQUIRE(!(curve.front().maturity < month_of(dates[i])), ErrorKind::domain,
                       "curve on " << to_string(dates[i]) << " quotes an expired delivery month");
    }
}

double PriceHistory::price_at(size_t i, const YearMonth& maturity) const {
    const auto& curve = curves[i];
    auto it = std::lower_bound(curve.begin(), curve.end(), maturity,
                               [](const CurvePoint& p, const YearMonth& m) {
                                   return p.maturity < m;
                               });
    if (it != curve.end() && it->maturity == maturity)
        return it->price;
    return -1.0;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_positive_price(const std::string& raw, const char* what, int lineno) {
    const std::string s = strip(raw);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    GASVAL_REQUIRE(!s.empty() && end == s.c_str() + s.size(), ErrorKind::parse,
                   what << " line " << lineno << ": bad price '" << raw << "'");
    GASVAL_REQUIRE(v > 0.0, ErrorKind::parse,
                   what << " line " << lineno << ": non-positive price " << v);
    return v;
}

void require_header(std::istream& in, const char* what, const char* expected) {
    std::string line;
    GASVAL_REQUIRE(std::getline(in, line), ErrorKind::empty_input, what << ": empty file");
    GASVAL_REQUIRE(strip(line) == expected, ErrorKind::parse,
                   what << ": expected header '" << expected << "', got '" << strip(line) << "'");
}

} // namespace

PriceHistory load_price_history(std::istream& spot_csv, std::istream& curve_csv) {
    require_header(spot_csv, "spot csv", "date,price");
    std::vector<std::pair<Date, double>> spot_rows;
    std::string line;
    int lineno = 1;
    while (std::getline(spot_csv, line)) {
        ++lineno;
        if (strip(line).empty())
            continue;
        auto fields = split_csv_line(line);
        GASVAL_REQUIRE(fields.size() == 2, ErrorKind::parse,
                       "spot csv line " << lineno << ": expected 2 fields");
        spot_rows.emplace_back(parse_date(strip(fields[0])),
                               parse_positive_price(fields[1], "spot csv", lineno));
    }
    GASVAL_REQUIRE(!spot_rows.empty(), ErrorKind::empty_input, "spot csv has no data rows");

    require_header(curve_csv, "curve csv", "date,maturity_month,price");
    std::map<Date, std::vector<CurvePoint>> curve_rows;
    lineno = 1;
    while (std::getline(curve_csv, line)) {
        ++lineno;
        if (strip(line).empty())
            continue;
        auto fields = split_csv_line(line);
        GASVAL_REQUIRE(fields.size() == 3, ErrorKind::parse,
                       "curve csv line " << lineno << ": expected 3 fields");
        Date d = parse_date(strip(fields[0]));
        YearMonth m = parse_year_month(strip(fields[1]));
        curve_rows[d].push_back(
            CurvePoint{m, parse_positive_price(fields[2], "curve csv", lineno)});
    }
    GASVAL_REQUIRE(!curve_rows.empty(), ErrorKind::empty_input, "curve csv has no data rows");

    PriceHistory h;
    for (auto& [d, s] : spot_rows) {
        auto it = curve_rows.find(d);
        if (it == curve_rows.end())
            continue; // keep only dates quoted in both files
        std::sort(it->second.begin(), it->second.end(),
                  [](const CurvePoint& a, const CurvePoint& b) { return a.maturity < b.maturity; });
        h.dates.push_back(d);
        h.spot.push_back(s);
        h.curves.push_back(it->second);
    }
    GASVAL_REQUIRE(!h.dates.empty(), ErrorKind::empty_input,
                   "spot and curve files share no observation dates");
    h.validate();
    return h;
}

PriceHistory load_price_history(const std::string& spot_csv_path,
                                const std::string& curve_csv_path) {
    std::ifstream spot(spot_csv_path);
    GASVAL_REQUIRE(spot.good(), ErrorKind::io, "cannot open '" << spot_csv_path << "'");
    std::ifstream curve(curve_csv_path);
    GASVAL_REQUIRE(curve.good(), ErrorKind::io, "cannot open '" << curve_csv_path << "'");
    return load_price_history(spot, curve);
}

std::vector<RollingPoint> rolling_series(const PriceHistory& h, const RollConvention& rc) {
    h.validate();
    std::vector<RollingPoint> out;
    out.reserve(h.size());
    for (size_t i = 0; i < h.size(); ++i) {
        const auto& curve = h.curves[i];
        int prompt = -1;
        for (size_t j = 0; j < curve.size(); ++j) {
            if (h.dates[i] < rc.expiry(curve[j].maturity)) {
                prompt = static_cast<int>(j);
                break;
            }
        }
        GASVAL_REQUIRE(prompt >= 0 && prompt + 1 < static_cast<int>(curve.size()),
                       ErrorKind::insufficient_curve,
                       "no live prompt and back contracts on " << to_string(h.dates[i]));
        RollingPoint p;
        p.date = h.dates[i];
        p.spot = h.spot[i];
        p.prompt = curve[prompt].price;
        p.back = curve[prompt + 1].price;
        p.x = (p.spot - p.prompt) / p.prompt;
        p.prompt_index = prompt;
        out.push_back(p);
    }
    return out;
}

int SpikeDetection::total() const {
    int n = 0;
    for (const auto& m : monthly_counts)
        n += m[0] + m[1];
    return n;
}

SpikeDetection detect_spikes(const std::vector<RollingPoint>& series, double k) {
    GASVAL_REQUIRE(series.size() >= 3, ErrorKind::insufficient_data,
                   "spike detection needs at least three observations");
    GASVAL_REQUIRE(k > 0.0, ErrorKind::domain, "spike threshold k must be positive");
    std::vector<double> x;
    x.reserve(series.size());
    for (const auto& p : series)
        x.push_back(p.x);

    SpikeDetection det;
    det.mean = mean(x);
    det.stddev = sample_std(x);
    det.threshold_k = k;
    if (det.stddev == 0.0)
        return det;
    for (const auto& p : series) {
        const double dev = p.x - det.mean;
        if (std::abs(dev) > k * det.stddev) {
            SpikeEvent ev{p.date, p.x, dev > 0.0};
            det.events.push_back(ev);
            det.monthly_counts[p.date.month - 1][ev.positive ? 1 : 0] += 1;
        }
    }
    return det;
}

} // namespace gasval
