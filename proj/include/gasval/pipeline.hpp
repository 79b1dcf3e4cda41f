#pragma once

#include "gasval/futures_model.hpp"
#include "gasval/hedging.hpp"
#include "gasval/intrinsic.hpp"
#include "gasval/spot_model.hpp"
#include "gasval/storage.hpp"
#include "gasval/valuation.hpp"

#include <string>
#include <vector>

namespace gasval {

// Full storage valuation: simulate, fit the policy and hedge on the backward
// seed, price on the forward seed.
struct ValuationJob {
    GabillonParams futures;
    SpotParams spot;
    std::vector<CurvePoint> initial_curve; // must quote months past the lease end
    double s0 = 0.0;
    StorageSpec spec;
    int n_paths = 5000;
    std::uint64_t seed_backward = 1;
    std::uint64_t seed_forward = 2;
    HedgeVariant hedge_variant = HedgeVariant::value;
    RollConvention rc;
};

struct ValuationResult {
    double backward_value = 0.0;
    ForwardResult forward; // unhedged, volumes recorded
    std::vector<double> hedge; // per-path futures leg
    double hedged_mean = 0.0;
    double hedged_std = 0.0;
    double hedged_std_err = 0.0;
    double intrinsic = 0.0; // monthly plan locked at the initial curve
    std::vector<double> delta0; // opening deltas per quoted maturity
    Policy policy;
    HedgePlan plan;
};

ValuationResult run_valuation(const ValuationJob& job);
// Same, with externally simulated curve paths (lets families share them).
ValuationResult run_valuation_with_curves(const ValuationJob& job, const CurvePathSet& curves_b,
                                          const CurvePathSet& curves_f);

// One simulated path written out as an aligned daily history; contracts stop
// being quoted at expiry. Used to build synthetic fixtures.
PriceHistory synthesize_history(const GabillonParams& futures, const SpotParams& spot,
                                const std::vector<CurvePoint>& initial_curve, double s0,
                                const Date& start, const Date& end, std::uint64_t seed,
                                const RollConvention& rc = {});

struct BacktestRow {
    int year = 0;
    double iv = 0.0;           // monthly plan at the lease-start curve
    double ev_sim = 0.0;       // simulated spot-strategy mean
    double iv_hist = 0.0;      // rolling plan re-locked along the realized curves
    double ev_hist = 0.0;      // spot strategy replayed on the realized path
    double std_unhedged = 0.0; // simulated dispersion without the futures leg
    double std_hedged = 0.0;   // and with it
    double ev_sim_std_err = 0.0;
};

struct BacktestReport {
    std::vector<BacktestRow> rows;
    std::vector<std::string> skipped; // "year: reason" for windows not covered
};

// Values one lease per year: the lease runs from the 1st of `start_month` to
// the same day next year, storage shape and parameters shared across years.
// Years whose window is not fully quoted in the history are skipped with a
// note; other years still run.
BacktestReport run_backtest(const PriceHistory& h, const ValuationJob& tmpl,
                            const std::vector<int>& years, int start_month);

} // namespace gasval
