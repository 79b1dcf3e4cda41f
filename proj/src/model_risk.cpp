#include "gasval/model_risk.hpp"

#include "gasval/errors.hpp"
#include "gasval/rng.hpp"
#include "gasval/stats.hpp"
#include "gasval/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gasval {

namespace {

// Square root of a covariance that may have lost definiteness to finite
// differencing: negative eigenvalues are floored at zero.
Eigen::MatrixXd covariance_root(const Eigen::MatrixXd& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    GASVAL_REQUIRE(es.info() == Eigen::Success, ErrorKind::singular_matrix,
                   "covariance eigendecomposition failed");
    Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal();
}

SpotParams with_theta(const SpotParams& base, const Eigen::VectorXd& theta) {
    SpotParams p = base;
    p.a1 = theta[0];
    p.a2 = theta[1];
    p.a3 = theta[2];
    p.garch.kappa = theta[3];
    p.garch.gamma1 = theta[4];
    p.garch.alpha1 = theta[5];
    return p;
}

} // namespace

ModelFamily generate_family(const SpotEstimate& fit, const PriceHistory& h, int model,
                            double spike_k, const FamilyOptions& opt, const RollConvention& rc) {
    GASVAL_REQUIRE(opt.n_target >= 1, ErrorKind::config, "family needs at least one member");
    GASVAL_REQUIRE(opt.likelihood_slack >= 0.0 && opt.ks_level > 0.0 && opt.ks_level < 1.0,
                   ErrorKind::config, "family acceptance thresholds out of range");
    GASVAL_REQUIRE(fit.params.model == model, ErrorKind::config,
                   "fit was made with spot model " << fit.params.model << ", family asked for "
                                                   << model);

    ModelFamily fam;
    fam.base.params = fit.params;
    fam.base.loglik = fit.loglik;
    fam.base.ks_pvalue =
        ks_test_standard_normal(spot_standardized_residuals(h, fit.params, spike_k, rc)).p_value;

    const Eigen::MatrixXd root = covariance_root(fit.covariance);
    Eigen::VectorXd center(6);
    center << fit.params.a1, fit.params.a2, fit.params.a3, fit.params.garch.kappa,
        fit.params.garch.gamma1, fit.params.garch.alpha1;
    const double floor_ll = fit.loglik - opt.likelihood_slack * std::abs(fit.loglik);

    Rng rng(opt.seed, 0, rng_tag::family);
    const int cap = opt.cap_multiplier * opt.n_target;
    while (static_cast<int>(fam.members.size()) < opt.n_target && fam.attempts < cap) {
        ++fam.attempts;
        Eigen::VectorXd z(6);
        for (int i = 0; i < 6; ++i)
            z[i] = rng.normal();
        const SpotParams cand = with_theta(fit.params, center + root * z);

        FamilyAttempt rec;
        rec.draw = fam.attempts;
        if (!(cand.garch.kappa > 0.0 && cand.garch.gamma1 >= 0.0 && cand.garch.alpha1 >= 0.0 &&
              cand.garch.stationary())) {
            ++fam.rejected_stationarity;
            rec.reject_reason = "non-stationary";
            fam.log.push_back(std::move(rec));
            continue;
        }
        const double ks_p =
            ks_test_standard_normal(spot_standardized_residuals(h, cand, spike_k, rc)).p_value;
        rec.ks_pvalue = ks_p;
        if (ks_p < opt.ks_level) {
            ++fam.rejected_ks;
            rec.reject_reason = "normality";
            fam.log.push_back(std::move(rec));
            continue;
        }
        const double ll = spot_loglik(h, cand, spike_k, rc);
        rec.loglik = ll;
        if (ll < floor_ll) {
            ++fam.rejected_likelihood;
            rec.reject_reason = "likelihood";
            fam.log.push_back(std::move(rec));
            continue;
        }
        rec.member_index = static_cast<int>(fam.members.size());
        fam.log.push_back(std::move(rec));
        fam.members.push_back({cand, ll, ks_p});
    }
    fam.reached_target = static_cast<int>(fam.members.size()) == opt.n_target;
    GASVAL_REQUIRE(!fam.members.empty(), ErrorKind::family_construction,
                   "no candidate accepted after " << fam.attempts << " draws ("
                                                  << fam.rejected_stationarity << " non-stationary, "
                                                  << fam.rejected_ks << " failed normality, "
                                                  << fam.rejected_likelihood
                                                  << " below the likelihood floor)");
    return fam;
}

namespace {

RiskMeasures collect(double base_value, std::vector<double> values) {
    GASVAL_REQUIRE(!values.empty(), ErrorKind::family_construction, "family has no members");
    GASVAL_REQUIRE(base_value != 0.0, ErrorKind::domain,
                   "spread measure needs a nonzero base value");
    RiskMeasures r;
    r.base_value = base_value;
    r.min_value = *std::min_element(values.begin(), values.end());
    r.max_value = *std::max_element(values.begin(), values.end());
    r.pi = (r.max_value - r.min_value) / base_value;
    r.member_values = std::move(values);
    return r;
}

struct SharedPaths {
    CurvePathSet curves_b;
    CurvePathSet curves_f;
};

SharedPaths simulate_shared(const RiskInputs& in) {
    const SimGrid grid = SimGrid::daily(in.spec.start, in.spec.end);
    SharedPaths s;
    s.curves_b = simulate_curves(in.futures, in.initial_curve, grid, in.n_paths, in.seed_backward);
    s.curves_f = simulate_curves(in.futures, in.initial_curve, grid, in.n_paths, in.seed_forward);
    return s;
}

double simulated_value(const FamilyMember& m, const SharedPaths& s, const RiskInputs& in) {
    const SpotPathSet spot_b = simulate_spot_paths(m.params, s.curves_b, in.s0, in.seed_backward);
    const Policy policy = fit_policy_backward(s.curves_b, spot_b, in.spec);
    const SpotPathSet spot_f = simulate_spot_paths(m.params, s.curves_f, in.s0, in.seed_forward);
    return evaluate_policy_forward(policy, s.curves_f, spot_f).mean;
}

double historical_wealth(const FamilyMember& m, const SharedPaths& s, const RiskInputs& in,
                         const PriceHistory& h, const RollConvention& rc) {
    const SpotPathSet spot_b = simulate_spot_paths(m.params, s.curves_b, in.s0, in.seed_backward);
    const Policy policy = fit_policy_backward(s.curves_b, spot_b, in.spec);
    const ForwardResult replay = evaluate_policy_forward(policy, s.curves_b, spot_b, true);
    const HedgePlan plan = fit_hedge_plan(in.hedge_variant, s.curves_b, spot_b, replay);
    return run_on_historical(policy, h, rc).wealth.front() + hedge_pnl_historical(plan, h, rc);
}

} // namespace

RiskMeasures risk_pi1(const ModelFamily& family, const RiskInputs& in) {
    const SharedPaths s = simulate_shared(in);
    std::vector<double> values;
    values.reserve(family.members.size());
    for (const auto& m : family.members)
        values.push_back(simulated_value(m, s, in));
    return collect(simulated_value(family.base, s, in), std::move(values));
}

RiskMeasures risk_pi2(const ModelFamily& family, const RiskInputs& in, const PriceHistory& h,
                      const RollConvention& rc) {
    const SharedPaths s = simulate_shared(in);
    std::vector<double> values;
    values.reserve(family.members.size());
    for (const auto& m : family.members)
        values.push_back(historical_wealth(m, s, in, h, rc));
    return collect(historical_wealth(family.base, s, in, h, rc), std::move(values));
}

} // namespace gasval
