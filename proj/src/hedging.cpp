#include "gasval/hedging.hpp"

#include "gasval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gasval {

double HedgePlan::delta(const double* basis, int step, int mat) const {
    const double* c = coeffs[step].col(mat).data();
    double d = 0.0;
    for (int k = 0; k < kBasisSize; ++k)
        d += c[k] * basis[k];
    return std::clamp(d, lo(step, mat), hi(step, mat));
}

HedgePlan fit_hedge_plan(HedgeVariant variant, const CurvePathSet& curves,
                         const SpotPathSet& spot, const ForwardResult& volumes) {
    GASVAL_REQUIRE(curves.grid.dates == spot.grid.dates, ErrorKind::grid,
                   "curve and spot paths live on different grids");
    GASVAL_REQUIRE(curves.n_paths == spot.n_paths, ErrorKind::domain,
                   "curve and spot path counts differ");
    GASVAL_REQUIRE(volumes.n_paths == curves.n_paths && volumes.n_steps == curves.grid.n_steps(),
                   ErrorKind::domain, "volume record does not match the path set");
    GASVAL_REQUIRE(!volumes.volumes.empty(), ErrorKind::domain,
                   "volume record was not kept; rerun the policy with recording on");

    const int n = curves.grid.n_steps();
    const int n_paths = curves.n_paths;
    const int n_mats = static_cast<int>(curves.maturities.size());

    HedgePlan plan;
    plan.variant = variant;
    plan.grid = curves.grid;
    plan.maturities = curves.maturities;
    plan.expiry_time = curves.expiry_time;
    plan.coeffs.assign(n, Eigen::MatrixXd::Zero(kBasisSize, n_mats));
    plan.lo = Eigen::MatrixXd::Zero(n, n_mats);
    plan.hi = Eigen::MatrixXd::Zero(n, n_mats);

    // Suffix sums over future steps, bucketed by the contract that is prompt
    // when the volume moves. Walking backward keeps them O(1) per step.
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n_paths, n_mats);
    const int j_hi = curves.prompt_index[n - 1];
    GASVAL_REQUIRE(j_hi >= 0, ErrorKind::insufficient_curve,
                   "no live contract at the last step");

    for (int i = n - 1; i >= 0; --i) {
        const int j_cur = curves.prompt_index[i];
        GASVAL_REQUIRE(j_cur >= 0, ErrorKind::insufficient_curve,
                       "no live contract at step " << i);
        for (int m = 0; m < n_paths; ++m) {
            const double dv = volumes.volume(m, i + 1) - volumes.volume(m, i);
            acc(m, j_cur) += variant == HedgeVariant::volume
                                 ? dv
                                 : dv * curves.price(m, i, j_cur);
        }

        const int n_live = j_hi - j_cur + 1;
        Eigen::MatrixXd targets(n_paths, n_live);
        for (int j = j_cur; j <= j_hi; ++j) {
            if (variant == HedgeVariant::volume) {
                targets.col(j - j_cur) = acc.col(j);
            } else {
                for (int m = 0; m < n_paths; ++m)
                    targets(m, j - j_cur) = acc(m, j) / curves.price(m, i, j);
            }
        }

        Eigen::MatrixXd phi = state_features(curves, spot, i);
        RegressionSolver solver(phi);
        Eigen::MatrixXd coef = solver.solve_many(targets);
        for (int j = j_cur; j <= j_hi; ++j) {
            plan.coeffs[i].col(j) = coef.col(j - j_cur);
            plan.lo(i, j) = targets.col(j - j_cur).minCoeff();
            plan.hi(i, j) = targets.col(j - j_cur).maxCoeff();
        }
    }
    return plan;
}

std::vector<double> hedge_pnl(const HedgePlan& plan, const CurvePathSet& curves,
                              const SpotPathSet& spot) {
    GASVAL_REQUIRE(curves.grid.dates == plan.grid.dates, ErrorKind::grid,
                   "path set and hedge plan live on different grids");
    GASVAL_REQUIRE(curves.grid.dates == spot.grid.dates, ErrorKind::grid,
                   "curve and spot paths live on different grids");
    GASVAL_REQUIRE(curves.maturities == plan.maturities, ErrorKind::domain,
                   "path set and hedge plan quote different contracts");
    GASVAL_REQUIRE(curves.n_paths == spot.n_paths, ErrorKind::domain,
                   "curve and spot path counts differ");

    const int n = plan.grid.n_steps();
    const int n_mats = static_cast<int>(plan.maturities.size());
    std::vector<double> pnl(curves.n_paths, 0.0);
    double feat[kBasisSize];
    for (int m = 0; m < curves.n_paths; ++m) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double s = spot.spot(m, i);
            const double p = curves.prompt(m, i);
            fill_basis(std::log(s), std::log(p), (s - p) / p, feat);
            const double t = plan.grid.t[i];
            for (int j = 0; j < n_mats; ++j) {
                if (plan.expiry_time[j] <= t)
                    continue; // dead contract, position is zero
                const double df = curves.price(m, i + 1, j) - curves.price(m, i, j);
                if (df != 0.0)
                    total += plan.delta(feat, i, j) * df;
            }
        }
        pnl[m] = total;
    }
    return pnl;
}

double hedge_pnl_historical(const HedgePlan& plan, const PriceHistory& h,
                            const RollConvention& rc) {
    const auto rolling = rolling_series(h, rc);
    std::map<Date, size_t> roll_by_date;
    for (size_t i = 0; i < rolling.size(); ++i)
        roll_by_date[rolling[i].date] = i;
    std::map<Date, size_t> row_by_date;
    for (size_t i = 0; i < h.dates.size(); ++i)
        row_by_date[h.dates[i]] = i;

    const int n = plan.grid.n_steps();
    const int n_mats = static_cast<int>(plan.maturities.size());
    std::vector<size_t> roll_idx(n + 1), row_idx(n + 1);
    for (int i = 0; i <= n; ++i) {
        const Date& d = plan.grid.dates[i];
        auto it = roll_by_date.find(d);
        GASVAL_REQUIRE(it != roll_by_date.end(), ErrorKind::gap,
                       "history has no observation on " << to_string(d));
        roll_idx[i] = it->second;
        row_idx[i] = row_by_date.at(d);
    }

    double feat[kBasisSize];
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = rolling[roll_idx[i]].spot;
        const double p = rolling[roll_idx[i]].prompt;
        fill_basis(std::log(s), std::log(p), (s - p) / p, feat);
        for (int j = 0; j < n_mats; ++j) {
            // dead before the step, or dying during it: the position is gone
            // by then (simulated curves freeze over the crossing step too)
            if (plan.expiry_time[j] <= plan.grid.t[i + 1])
                continue;
            const double f0 = h.price_at(row_idx[i], plan.maturities[j]);
            const double f1 = h.price_at(row_idx[i + 1], plan.maturities[j]);
            GASVAL_REQUIRE(f0 > 0.0 && f1 > 0.0, ErrorKind::gap,
                           "missing quote for " << to_string(plan.maturities[j]) << " around "
                                                << to_string(plan.grid.dates[i]));
            total += plan.delta(feat, i, j) * (f1 - f0);
        }
    }
    return total;
}

} // namespace gasval
