#include "gasval/spot_model.hpp"

#include "gasval/errors.hpp"
#include "gasval/nelder_mead.hpp"
#include "gasval/regression.hpp"
#include "gasval/rng.hpp"
#include "gasval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace gasval {

namespace {
constexpr double kLog2Pi = 1.8378770664093453; // log(2 pi)
constexpr double kSpreadFloor = -0.95;
}

void GarchParams::validate() const {
    GASVAL_REQUIRE(kappa > 0.0, ErrorKind::domain, "kappa must be positive");
    GASVAL_REQUIRE(gamma1 >= 0.0 && alpha1 >= 0.0, ErrorKind::domain,
                   "GARCH coefficients must be non-negative");
    GASVAL_REQUIRE(gamma1 + alpha1 < 1.0, ErrorKind::domain,
                   "GARCH not stationary: gamma1 + alpha1 = " << gamma1 + alpha1);
}

void SpotParams::validate() const {
    GASVAL_REQUIRE(model == 1 || model == 2, ErrorKind::domain, "model must be 1 or 2");
    garch.validate();
    for (const SpikeParams* sp : {&spike_pos, &spike_neg}) {
        GASVAL_REQUIRE(sp->beta > 0.0, ErrorKind::domain, "spike beta must be positive");
        GASVAL_REQUIRE(sp->intensity >= 0.0, ErrorKind::domain,
                       "spike intensity must be non-negative");
        GASVAL_REQUIRE(sp->jump_std >= 0.0, ErrorKind::domain,
                       "spike jump std must be non-negative");
        for (int m : sp->months)
            GASVAL_REQUIRE(m >= 1 && m <= 12, ErrorKind::domain, "spike month out of range");
    }
}

GarchFilterResult garch_filter(const std::vector<double>& eps, const GarchParams& g,
                               double initial_var) {
    g.validate();
    GASVAL_REQUIRE(initial_var > 0.0, ErrorKind::domain, "initial variance must be positive");
    GASVAL_REQUIRE(!eps.empty(), ErrorKind::empty_input, "empty residual series");
    GarchFilterResult r;
    r.sigma2.resize(eps.size());
    r.z.resize(eps.size());
    double s2 = initial_var;
    for (size_t t = 0; t < eps.size(); ++t) {
        r.sigma2[t] = s2;
        r.z[t] = eps[t] / std::sqrt(s2);
        s2 = g.kappa + g.gamma1 * s2 + g.alpha1 * eps[t] * eps[t];
    }
    return r;
}

namespace {

std::array<bool, 13> month_mask(const std::vector<int>& months) {
    std::array<bool, 13> mask{};
    for (int m : months)
        mask[m] = true;
    return mask;
}

} // namespace

std::vector<double> spike_path(const SpikeParams& sp, const SimGrid& grid,
                               const std::vector<std::pair<int, double>>& arrivals) {
    const int n = grid.n_steps();
    for (const auto& [step, size] : arrivals)
        GASVAL_REQUIRE(step >= 1 && step <= n, ErrorKind::domain,
                       "spike arrival step " << step << " outside grid");
    const auto mask = month_mask(sp.months);
    std::vector<double> y(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        const double dt = grid.t[i] - grid.t[i - 1];
        y[i] = y[i - 1] * std::exp(-sp.beta * dt);
        for (const auto& [step, size] : arrivals)
            if (step == i && mask[grid.dates[i].month])
                y[i] += size;
    }
    return y;
}

std::vector<double> simulate_spikes(const SpikeParams& sp, const SimGrid& grid, int n_paths,
                                    std::uint64_t seed, std::uint64_t tag) {
    const int n = grid.n_steps();
    const auto mask = month_mask(sp.months);
    std::vector<double> out(static_cast<size_t>(n_paths) * (n + 1), 0.0);
    for (int p = 0; p < n_paths; ++p) {
        Rng rng(seed, static_cast<std::uint64_t>(p), tag);
        double y = 0.0;
        double* row = out.data() + static_cast<size_t>(p) * (n + 1);
        for (int i = 1; i <= n; ++i) {
            const double dt = grid.t[i] - grid.t[i - 1];
            y *= std::exp(-sp.beta * dt);
            const int arrivals = sp.intensity > 0.0 ? rng.poisson(sp.intensity * dt) : 0;
            for (int a = 0; a < arrivals; ++a) {
                const double jump = sp.jump_mean + sp.jump_std * rng.normal();
                if (mask[grid.dates[i].month])
                    y += jump;
            }
            row[i] = y;
        }
    }
    return out;
}

SpotPathSet simulate_spot_paths(const SpotParams& p, const CurvePathSet& curves, double s0,
                                std::uint64_t seed) {
    p.validate();
    GASVAL_REQUIRE(s0 > 0.0, ErrorKind::domain, "initial spot must be positive");
    const int n = curves.grid.n_steps();
    const int n_paths = curves.n_paths;
    for (int i = 0; i <= n; ++i) {
        GASVAL_REQUIRE(curves.prompt_index[i] >= 0, ErrorKind::insufficient_curve,
                       "curve set has no live prompt at step " << i);
        if (p.model == 2)
            GASVAL_REQUIRE(curves.prompt_index[i] + 1 <
                               static_cast<int>(curves.maturities.size()),
                           ErrorKind::insufficient_curve,
                           "model 2 needs a back contract at step " << i);
    }

    SpotPathSet set;
    set.grid = curves.grid;
    set.n_paths = n_paths;
    set.seed = seed;
    set.base.resize(static_cast<size_t>(n_paths) * (n + 1));
    set.variance.resize(static_cast<size_t>(n_paths) * (n + 1));
    set.floor_count.assign(n_paths, 0);

    const double s2_0 = p.garch.unconditional_var();
    for (int path = 0; path < n_paths; ++path) {
        Rng rng(seed, static_cast<std::uint64_t>(path), rng_tag::spot);
        double* base = set.base.data() + static_cast<size_t>(path) * (n + 1);
        double* var = set.variance.data() + static_cast<size_t>(path) * (n + 1);
        base[0] = s0;
        var[0] = s2_0;
        double s2 = s2_0;
        double eps_prev_sq = s2_0; // pre-sample shock at its expected size
        if (p.model == 1) {
            double log_s = std::log(s0);
            for (int i = 1; i <= n; ++i) {
                s2 = p.garch.kappa + p.garch.gamma1 * s2 + p.garch.alpha1 * eps_prev_sq;
                const double p_prev = curves.prompt(path, i - 1);
                const double p_cur = curves.prompt(path, i);
                const double eps = std::sqrt(s2) * rng.normal();
                log_s += p.a1 + p.a2 * (std::log(p_prev) - log_s) +
                         p.a3 * std::log(p_cur / p_prev) + eps;
                base[i] = std::exp(log_s);
                var[i] = s2;
                eps_prev_sq = eps * eps;
            }
        } else {
            double y = (s0 - curves.prompt(path, 0)) / curves.prompt(path, 0);
            for (int i = 1; i <= n; ++i) {
                s2 = p.garch.kappa + p.garch.gamma1 * s2 + p.garch.alpha1 * eps_prev_sq;
                const double p_prev = curves.prompt(path, i - 1);
                const double b_prev = curves.back(path, i - 1);
                const double drift = p.a1 + p.a2 * y + p.a3 * (p_prev - b_prev) / b_prev;
                double eps = std::sqrt(s2) * rng.normal();
                double y_next = drift + eps;
                if (y_next <= kSpreadFloor) {
                    eps = std::sqrt(s2) * rng.normal(); // one resample
                    y_next = drift + eps;
                    if (y_next <= kSpreadFloor) {
                        y_next = kSpreadFloor;
                        eps = y_next - drift;
                        set.floor_count[path] += 1;
                    }
                }
                y = y_next;
                base[i] = curves.prompt(path, i) * (1.0 + y);
                var[i] = s2;
                eps_prev_sq = eps * eps;
            }
        }
    }

    const auto y_pos = simulate_spikes(p.spike_pos, set.grid, n_paths, seed, rng_tag::spike_pos);
    const auto y_neg = simulate_spikes(p.spike_neg, set.grid, n_paths, seed, rng_tag::spike_neg);
    set.spiked.resize(set.base.size());
    for (size_t i = 0; i < set.base.size(); ++i)
        set.spiked[i] = std::exp(y_pos[i] + y_neg[i]) * set.base[i];
    return set;
}

SpotSample build_spot_sample(const PriceHistory& h, int model, double spike_k,
                             const RollConvention& rc) {
    GASVAL_REQUIRE(model == 1 || model == 2, ErrorKind::domain, "model must be 1 or 2");
    const auto rolling = rolling_series(h, rc);
    SpotSample s;
    s.detection = detect_spikes(rolling, spike_k);
    std::set<Date> flagged;
    for (const auto& ev : s.detection.events)
        flagged.insert(ev.date);

    const size_t n = rolling.size();
    std::vector<double> resp;
    std::vector<std::array<double, 3>> rows;
    for (size_t t = 1; t < n; ++t) {
        if (flagged.count(rolling[t].date) || flagged.count(rolling[t - 1].date)) {
            ++s.n_excised;
            continue;
        }
        const auto& cur = rolling[t];
        const auto& prev = rolling[t - 1];
        if (model == 1) {
            resp.push_back(std::log(cur.spot / prev.spot));
            rows.push_back({1.0, std::log(prev.prompt / prev.spot),
                            std::log(cur.prompt / prev.prompt)});
        } else {
            resp.push_back(cur.x);
            rows.push_back({1.0, prev.x, (prev.prompt - prev.back) / prev.back});
        }
        s.dates.push_back(cur.date);
    }
    GASVAL_REQUIRE(!rows.empty(), ErrorKind::insufficient_data,
                   "no regression rows left after spike excision");
    s.x.resize(rows.size(), 3);
    s.resp.resize(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        s.x(i, 0) = rows[i][0];
        s.x(i, 1) = rows[i][1];
        s.x(i, 2) = rows[i][2];
        s.resp(i) = resp[i];
    }
    return s;
}

namespace {

// One half of the Gaussian deviance; sigma2 recursion starts at the
// unconditional variance.
double garch_nll(const Eigen::VectorXd& eps, const GarchParams& g) {
    const double s2_0 = g.unconditional_var();
    double s2 = s2_0;
    double nll = 0.0;
    for (Eigen::Index t = 0; t < eps.size(); ++t) {
        nll += 0.5 * (kLog2Pi + std::log(s2) + eps(t) * eps(t) / s2);
        s2 = g.kappa + g.gamma1 * s2 + g.alpha1 * eps(t) * eps(t);
    }
    return nll;
}

constexpr double kGarchPenalty = 1e10;

double garch_nll_box(const Eigen::VectorXd& eps, const Eigen::VectorXd& th) {
    const double kappa = th(0), gamma = th(1), alpha = th(2);
    if (kappa <= 0.0 || gamma < 0.0 || alpha < 0.0 || gamma + alpha >= 0.9999)
        return kGarchPenalty;
    return garch_nll(eps, GarchParams{kappa, gamma, alpha});
}

double joint_nll(const SpotSample& s, const Eigen::VectorXd& th) {
    const double kappa = th(3), gamma = th(4), alpha = th(5);
    if (kappa <= 0.0 || gamma < 0.0 || alpha < 0.0 || gamma + alpha >= 1.0)
        return kGarchPenalty;
    Eigen::VectorXd eps = s.resp - s.x * th.head(3);
    return garch_nll(eps, GarchParams{kappa, gamma, alpha});
}

struct SpikeLawFit {
    double intensity = 0.0;
    double jump_mean = 0.0;
    double jump_std = 0.0;
    int count = 0;
    bool defaulted = false;
};

SpikeLawFit fit_spike_law(const SpikeDetection& det, bool positive, const Date& first,
                          const Date& last, const std::vector<int>& months, double def_mean,
                          double def_std) {
    SpikeLawFit f;
    std::vector<double> logs;
    for (const auto& ev : det.events) {
        if (ev.positive != positive)
            continue;
        logs.push_back(std::log1p(ev.relative_size));
        ++f.count;
    }
    const auto mask = month_mask(months);
    long in_window_days = 0;
    for (long s = to_serial(first); s <= to_serial(last); ++s)
        if (mask[from_serial(s).month])
            ++in_window_days;
    const double window_years = static_cast<double>(in_window_days) / 365.0;
    f.intensity = window_years > 0.0 ? f.count / window_years : 0.0;
    if (f.count >= 3) {
        f.jump_mean = mean(logs);
        f.jump_std = sample_std(logs);
    } else {
        f.jump_mean = def_mean;
        f.jump_std = def_std;
        f.defaulted = true;
    }
    return f;
}

} // namespace

SpotEstimate estimate_spot(const PriceHistory& h, int model, double spike_k,
                           const RollConvention& rc, const SpotEstimateOptions& opt) {
    SpotSample sample = build_spot_sample(h, model, spike_k, rc);
    GASVAL_REQUIRE(sample.resp.size() >= opt.min_observations, ErrorKind::insufficient_data,
                   "spot estimation needs at least " << opt.min_observations
                                                     << " usable rows, got "
                                                     << sample.resp.size());

    SpotEstimate est;
    est.detection = sample.detection;
    est.n_obs = static_cast<int>(sample.resp.size());
    est.n_excised = sample.n_excised;
    est.params.model = model;

    // Stage 1: OLS mean equation.
    Eigen::VectorXd a = sample.x.colPivHouseholderQr().solve(sample.resp);
    est.params.a1 = a(0);
    est.params.a2 = a(1);
    est.params.a3 = a(2);
    Eigen::VectorXd eps = sample.resp - sample.x * a;

    // Stage 2: GARCH quasi-MLE on the residuals.
    const double var0 = eps.squaredNorm() / static_cast<double>(eps.size());
    Eigen::VectorXd g0(3);
    g0 << 0.05 * var0, 0.85, 0.10;
    Eigen::VectorXd gstep(3);
    gstep << 0.5 * g0(0), 0.05, 0.05;
    NelderMeadOptions nm_opt;
    nm_opt.max_iter = opt.max_iter;
    nm_opt.f_tol = 1e-12;
    nm_opt.x_tol = 1e-12;
    auto g_obj = [&eps](const Eigen::VectorXd& th) { return garch_nll_box(eps, th); };
    NelderMeadResult nm = nelder_mead(g_obj, g0, gstep, nm_opt);
    GASVAL_REQUIRE(nm.f < kGarchPenalty, ErrorKind::convergence,
                   "GARCH likelihood never entered the stationary region");
    if (!nm.converged)
        est.warnings.push_back("garch optimizer stopped at the iteration limit");
    est.params.garch = GarchParams{nm.x(0), nm.x(1), nm.x(2)};
    est.params.garch.validate();
    est.loglik = -nm.f;

    // Spike laws on log scale, by sign.
    const Date first = h.dates.front(), last = h.dates.back();
    SpikeLawFit pos = fit_spike_law(sample.detection, true, first, last,
                                    est.params.spike_pos.months, opt.default_pos_jump_mean,
                                    opt.default_pos_jump_std);
    SpikeLawFit neg = fit_spike_law(sample.detection, false, first, last,
                                    est.params.spike_neg.months, opt.default_neg_jump_mean,
                                    opt.default_neg_jump_std);
    est.params.spike_pos.intensity = pos.intensity;
    est.params.spike_pos.jump_mean = pos.jump_mean;
    est.params.spike_pos.jump_std = pos.jump_std;
    est.params.spike_neg.intensity = neg.intensity;
    est.params.spike_neg.jump_mean = neg.jump_mean;
    est.params.spike_neg.jump_std = neg.jump_std;
    if (pos.defaulted)
        est.warnings.push_back("fewer than 3 positive spike events; jump law from defaults");
    if (neg.defaulted)
        est.warnings.push_back("fewer than 3 negative spike events; jump law from defaults");

    // Covariance of (a1, a2, a3, kappa, gamma1, alpha1): inverse Hessian of the
    // joint Gaussian NLL at the two-stage estimate.
    Eigen::VectorXd th(6);
    th << a(0), a(1), a(2), nm.x(0), nm.x(1), nm.x(2);
    Eigen::VectorXd hstep(6);
    for (int k = 0; k < 6; ++k)
        hstep(k) = std::max(1e-4 * std::abs(th(k)), 1e-7);
    auto f = [&sample](const Eigen::VectorXd& v) { return joint_nll(sample, v); };
    const double f0 = f(th);
    Eigen::MatrixXd hess(6, 6);
    for (int k = 0; k < 6; ++k) {
        for (int l = k; l < 6; ++l) {
            if (k == l) {
                Eigen::VectorXd v = th;
                v(k) = th(k) + hstep(k);
                const double fp = f(v);
                v(k) = th(k) - hstep(k);
                const double fm = f(v);
                hess(k, k) = (fp - 2.0 * f0 + fm) / (hstep(k) * hstep(k));
            } else {
                double acc = 0.0;
                for (int sk : {1, -1})
                    for (int sl : {1, -1}) {
                        Eigen::VectorXd v = th;
                        v(k) += sk * hstep(k);
                        v(l) += sl * hstep(l);
                        acc += sk * sl * f(v);
                    }
                hess(k, l) = hess(l, k) = acc / (4.0 * hstep(k) * hstep(l));
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    if (es.eigenvalues().minCoeff() > 0.0) {
        est.covariance = hess.inverse();
        est.covariance_ok = true;
    } else {
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-10);
        est.covariance =
            es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
        est.covariance_ok = false;
        est.warnings.push_back("joint information matrix not positive definite");
    }
    return est;
}

double spot_loglik(const PriceHistory& h, const SpotParams& p, double spike_k,
                   const RollConvention& rc) {
    p.garch.validate();
    SpotSample sample = build_spot_sample(h, p.model, spike_k, rc);
    Eigen::VectorXd a(3);
    a << p.a1, p.a2, p.a3;
    Eigen::VectorXd eps = sample.resp - sample.x * a;
    return -garch_nll(eps, p.garch);
}

std::vector<double> spot_standardized_residuals(const PriceHistory& h, const SpotParams& p,
                                                double spike_k, const RollConvention& rc) {
    p.garch.validate();
    SpotSample sample = build_spot_sample(h, p.model, spike_k, rc);
    Eigen::VectorXd a(3);
    a << p.a1, p.a2, p.a3;
    Eigen::VectorXd eps_vec = sample.resp - sample.x * a;
    std::vector<double> eps(eps_vec.data(), eps_vec.data() + eps_vec.size());
    auto filt = garch_filter(eps, p.garch, p.garch.unconditional_var());
    return filt.z;
}

} // namespace gasval
