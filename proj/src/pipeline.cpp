#include "gasval/pipeline.hpp"

#include "gasval/errors.hpp"
#include "gasval/stats.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace gasval {

ValuationResult run_valuation(const ValuationJob& job) {
    const SimGrid grid = SimGrid::daily(job.spec.start, job.spec.end);
    const CurvePathSet curves_b =
        simulate_curves(job.futures, job.initial_curve, grid, job.n_paths, job.seed_backward, job.rc);
    const CurvePathSet curves_f =
        simulate_curves(job.futures, job.initial_curve, grid, job.n_paths, job.seed_forward, job.rc);
    return run_valuation_with_curves(job, curves_b, curves_f);
}

ValuationResult run_valuation_with_curves(const ValuationJob& job, const CurvePathSet& curves_b,
                                          const CurvePathSet& curves_f) {
    GASVAL_REQUIRE(job.seed_backward != job.seed_forward, ErrorKind::config,
                   "backward and forward phases must use distinct seeds");
    GASVAL_REQUIRE(job.s0 > 0.0, ErrorKind::domain, "initial spot must be positive");

    ValuationResult r;
    const SpotPathSet spot_b = simulate_spot_paths(job.spot, curves_b, job.s0, job.seed_backward);
    r.policy = fit_policy_backward(curves_b, spot_b, job.spec);
    r.backward_value = r.policy.backward_value;

    const ForwardResult replay = evaluate_policy_forward(r.policy, curves_b, spot_b, true);
    r.plan = fit_hedge_plan(job.hedge_variant, curves_b, spot_b, replay);

    const SpotPathSet spot_f = simulate_spot_paths(job.spot, curves_f, job.s0, job.seed_forward);
    r.forward = evaluate_policy_forward(r.policy, curves_f, spot_f, true);
    r.hedge = hedge_pnl(r.plan, curves_f, spot_f);

    std::vector<double> hedged(r.forward.wealth.size());
    for (size_t i = 0; i < hedged.size(); ++i)
        hedged[i] = r.forward.wealth[i] + r.hedge[i];
    r.hedged_mean = mean(hedged);
    if (hedged.size() >= 2) {
        r.hedged_std = sample_std(hedged);
        r.hedged_std_err = r.hedged_std / std::sqrt(static_cast<double>(hedged.size()));
    }

    r.intrinsic = intrinsic_value(job.initial_curve, job.spec.start, job.spec, job.rc).value;

    double feat[kBasisSize];
    const double p0 = curves_f.prompt(0, 0);
    fill_basis(std::log(job.s0), std::log(p0), (job.s0 - p0) / p0, feat);
    r.delta0.resize(r.plan.maturities.size());
    for (size_t j = 0; j < r.delta0.size(); ++j)
        r.delta0[j] = r.plan.delta(feat, 0, static_cast<int>(j));
    return r;
}

PriceHistory synthesize_history(const GabillonParams& futures, const SpotParams& spot,
                                const std::vector<CurvePoint>& initial_curve, double s0,
                                const Date& start, const Date& end, std::uint64_t seed,
                                const RollConvention& rc) {
    const SimGrid grid = SimGrid::daily(start, end);
    const CurvePathSet curves = simulate_curves(futures, initial_curve, grid, 1, seed, rc);
    const SpotPathSet spots = simulate_spot_paths(spot, curves, s0, seed);

    PriceHistory h;
    const int n = grid.n_steps();
    h.dates = grid.dates;
    h.spot.resize(n + 1);
    h.curves.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        h.spot[i] = spots.spot(0, i);
        for (size_t j = 0; j < curves.maturities.size(); ++j) {
            if (rc.expiry(curves.maturities[j]) > grid.dates[i])
                h.curves[i].push_back({curves.maturities[j], curves.price(0, i, static_cast<int>(j))});
        }
    }
    h.validate();
    return h;
}

BacktestReport run_backtest(const PriceHistory& h, const ValuationJob& tmpl,
                            const std::vector<int>& years, int start_month) {
    GASVAL_REQUIRE(!years.empty(), ErrorKind::config, "backtest needs at least one year");
    GASVAL_REQUIRE(start_month >= 1 && start_month <= 12, ErrorKind::config,
                   "start month out of range");

    std::map<Date, size_t> by_date;
    for (size_t i = 0; i < h.dates.size(); ++i)
        by_date[h.dates[i]] = i;

    BacktestReport report;
    for (const int year : years) {
        try {
            ValuationJob job = tmpl;
            job.spec.start = Date{year, start_month, 1};
            job.spec.end = Date{year + 1, start_month, 1};

            auto it = by_date.find(job.spec.start);
            GASVAL_REQUIRE(it != by_date.end(), ErrorKind::gap,
                           "history has no observation on " << to_string(job.spec.start));
            job.initial_curve = h.curves[it->second];
            job.s0 = h.spot[it->second];

            const ValuationResult val = run_valuation(job);

            const SimGrid grid = SimGrid::daily(job.spec.start, job.spec.end);
            const auto snapshots = curve_snapshots(h, grid.dates);
            const RollingIntrinsicResult ri =
                rolling_intrinsic(grid.dates, snapshots, job.spec, job.rc);

            BacktestRow row;
            row.year = year;
            row.iv = val.intrinsic;
            row.ev_sim = val.forward.mean;
            row.ev_sim_std_err = val.forward.std_err;
            row.iv_hist = ri.final_value;
            row.ev_hist = run_on_historical(val.policy, h, job.rc).wealth.front();
            row.std_unhedged = val.forward.std_dev;
            row.std_hedged = val.hedged_std;
            report.rows.push_back(row);
        } catch (const Error& e) {
            std::ostringstream os;
            os << year << ": " << e.what();
            report.skipped.push_back(os.str());
        }
    }
    return report;
}

} // namespace gasval
