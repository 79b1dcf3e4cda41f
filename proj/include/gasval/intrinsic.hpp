#pragma once

#include "gasval/calendar.hpp"
#include "gasval/market_data.hpp"
#include "gasval/storage.hpp"

#include <vector>

namespace gasval {

// Monthly trading plan locked against a futures curve. alpha is the net
// volume change per delivery month, positive for injection (gas bought).
struct IntrinsicSolution {
    double value = 0.0; // worth of the live part of the plan, revenue positive
    std::vector<YearMonth> maturities;
    std::vector<double> alpha;
    std::vector<char> fixed;        // 1 when the month had already expired
    std::vector<int> prefix_bound;  // month-end volume: -1 at floor, +1 at cap
    int iterations = 0;
};

// Delivery months whose window lies entirely inside the lease.
std::vector<YearMonth> lease_delivery_months(const StorageSpec& spec);

// Optimal monthly plan against one curve snapshot. Months expired by
// `valuation` are pinned to `committed` (zero when absent); the rest trade
// within daily-rate capacity times days in the month, keeping every month-end
// volume inside the store and landing on v_end_target.
IntrinsicSolution intrinsic_value(const std::vector<CurvePoint>& curve, const Date& valuation,
                                  const StorageSpec& spec, const RollConvention& rc = {},
                                  const std::vector<double>* committed = nullptr);

struct RollingIntrinsicPoint {
    Date date;
    double improvement = 0.0; // value gained by re-locking, zero when kept
    double cumulative = 0.0;
    bool adopted = false;
};

struct RollingIntrinsicResult {
    double initial_value = 0.0;
    double final_value = 0.0;
    std::vector<RollingIntrinsicPoint> points;
    std::vector<YearMonth> maturities;
    std::vector<double> alpha; // final committed plan
};

// Re-optimizes the locked plan at each date, keeping the new plan only when
// it improves the mark of the live months by more than a tick. The running
// value never drops below the initial intrinsic value.
RollingIntrinsicResult rolling_intrinsic(const std::vector<Date>& dates,
                                         const std::vector<std::vector<CurvePoint>>& curves,
                                         const StorageSpec& spec, const RollConvention& rc = {});

// Snapshot helpers for the driver above.
std::vector<std::vector<CurvePoint>> curve_snapshots(const PriceHistory& h,
                                                     const std::vector<Date>& dates);

} // namespace gasval
