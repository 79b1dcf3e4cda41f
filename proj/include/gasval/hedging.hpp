#pragma once

#include "gasval/futures_model.hpp"
#include "gasval/market_data.hpp"
#include "gasval/regression.hpp"
#include "gasval/valuation.hpp"

#include <Eigen/Dense>
#include <vector>

namespace gasval {

// Which quantity a futures position tracks: expected future volume moves, or
// volume moves scaled to current contract value.
enum class HedgeVariant { volume = 1, value = 2 };

// Per-step, per-contract regression coefficients mapping the state basis to a
// futures delta. Contracts past expiry carry zero coefficients.
struct HedgePlan {
    HedgeVariant variant = HedgeVariant::value;
    SimGrid grid;
    std::vector<YearMonth> maturities;
    std::vector<double> expiry_time;
    // coeffs[i] is kBasisSize x n_maturities: deltas held over [t_i, t_{i+1}).
    std::vector<Eigen::MatrixXd> coeffs;
    // Realized target range per (step, maturity). Predictions are clamped to
    // it: a quadratic basis extrapolates wildly on states outside the fitting
    // cloud, and no conditional mean can leave the range of its sample.
    Eigen::MatrixXd lo, hi;

    double delta(const double* basis, int step, int mat) const;
};

// Fits deltas on a simulated path set. `volumes` must come from a policy run
// recorded on the same paths. Each step is attributed to the contract that is
// prompt there, so a contract's delta dies at its expiry.
HedgePlan fit_hedge_plan(HedgeVariant variant, const CurvePathSet& curves,
                         const SpotPathSet& spot, const ForwardResult& volumes);

// Per-path profit of holding the plan's deltas against the simulated futures
// moves. Add to unhedged wealth to get hedged wealth.
std::vector<double> hedge_pnl(const HedgePlan& plan, const CurvePathSet& curves,
                              const SpotPathSet& spot);

// Same plan run against a realized price history; the grid dates must all be
// quoted. Returns the scalar hedge profit.
double hedge_pnl_historical(const HedgePlan& plan, const PriceHistory& h,
                            const RollConvention& rc);

} // namespace gasval
