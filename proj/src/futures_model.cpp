#include "gasval/futures_model.hpp"

#include "gasval/nelder_mead.hpp"
#include "gasval/rng.hpp"
#include "gasval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gasval {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double GabillonParams::seasonal_vol(double t) const {
    return 1.0 + mu1 * std::cos(kTwoPi * (t - t1)) + mu2 * std::cos(2.0 * kTwoPi * (t - t2));
}

void GabillonParams::validate() const {
    GASVAL_REQUIRE(lambda >= 0.0, ErrorKind::domain, "lambda must be non-negative");
    GASVAL_REQUIRE(sigma_s >= 0.0 && sigma_l >= 0.0, ErrorKind::domain,
                   "volatilities must be non-negative");
    GASVAL_REQUIRE(std::abs(rho) <= 1.0, ErrorKind::domain, "|rho| must not exceed 1");
    // phi has period one year; a fine grid over [0,1) certifies positivity.
    for (int i = 0; i < 2048; ++i)
        GASVAL_REQUIRE(seasonal_vol(t1 + i / 2048.0) > 0.0, ErrorKind::domain,
                       "seasonal weight phi is not strictly positive");
}

double CurvePathSet::prompt(int path, int step) const {
    const int j = prompt_index[step];
    GASVAL_REQUIRE(j >= 0, ErrorKind::insufficient_curve,
                   "no live prompt contract at grid step " << step);
    return price(path, step, j);
}

double CurvePathSet::back(int path, int step) const {
    const int j = prompt_index[step];
    GASVAL_REQUIRE(j >= 0 && j + 1 < static_cast<int>(maturities.size()),
                   ErrorKind::insufficient_curve, "no back contract at grid step " << step);
    return price(path, step, j + 1);
}

CurvePathSet simulate_curves(const GabillonParams& p, const std::vector<CurvePoint>& initial_curve,
                             const SimGrid& grid, int n_paths, std::uint64_t seed,
                             const RollConvention& rc) {
    p.validate();
    GASVAL_REQUIRE(n_paths >= 1, ErrorKind::domain, "n_paths must be positive");
    GASVAL_REQUIRE(initial_curve.size() >= 1, ErrorKind::insufficient_curve,
                   "initial curve is empty");
    for (size_t j = 0; j < initial_curve.size(); ++j) {
        GASVAL_REQUIRE(initial_curve[j].price > 0.0, ErrorKind::domain,
                       "initial futures price must be positive");
        if (j > 0)
            GASVAL_REQUIRE(initial_curve[j - 1].maturity < initial_curve[j].maturity,
                           ErrorKind::ordering, "initial curve maturities unsorted");
    }

    CurvePathSet set;
    set.grid = grid;
    set.n_paths = n_paths;
    set.seed = seed;
    const int n_steps = grid.n_steps();
    const int n_mats = static_cast<int>(initial_curve.size());
    set.maturities.reserve(n_mats);
    for (const auto& cp : initial_curve) {
        set.maturities.push_back(cp.maturity);
        Date ex = rc.expiry(cp.maturity);
        set.expiry_date.push_back(ex);
        set.expiry_time.push_back(year_fraction(ex));
    }
    set.prompt_index.resize(n_steps + 1);
    for (int i = 0; i <= n_steps; ++i) {
        set.prompt_index[i] = -1;
        for (int j = 0; j < n_mats; ++j) {
            if (grid.dates[i] < set.expiry_date[j]) {
                set.prompt_index[i] = j;
                break;
            }
        }
    }

    set.data.resize(static_cast<size_t>(n_paths) * (n_steps + 1) * n_mats);

    const double rho_c = std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho));
    std::vector<double> log_f(n_mats);
    for (int path = 0; path < n_paths; ++path) {
        Rng rng(seed, static_cast<std::uint64_t>(path), rng_tag::curve);
        for (int j = 0; j < n_mats; ++j) {
            set.price(path, 0, j) = initial_curve[j].price;
            log_f[j] = std::log(initial_curve[j].price);
        }
        for (int i = 0; i < n_steps; ++i) {
            const double t = grid.t[i];
            const double dt = grid.t[i + 1] - grid.t[i];
            const double sdt = std::sqrt(dt);
            const double phi = p.seasonal_vol(t);
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const double eps_s = z1;
            const double eps_l = p.rho * z1 + rho_c * z2;
            for (int j = 0; j < n_mats; ++j) {
                if (!(grid.dates[i] < set.expiry_date[j])) {
                    set.price(path, i + 1, j) = set.price(path, i, j);
                    continue;
                }
                const double decay = std::exp(-p.lambda * (set.expiry_time[j] - t));
                const double load_s = decay * phi * p.sigma_s;
                const double load_l = (1.0 - decay) * p.sigma_l;
                const double v2 = load_s * load_s + load_l * load_l +
                                  2.0 * p.rho * load_s * load_l;
                log_f[j] += -0.5 * v2 * dt + sdt * (load_s * eps_s + load_l * eps_l);
                set.price(path, i + 1, j) = std::exp(log_f[j]);
            }
        }
    }
    return set;
}

namespace {

// Normalized returns z/sqrt(dt) of a rolling futures series.
std::vector<double> normalized_returns(const std::vector<double>& prices,
                                       const std::vector<double>& t) {
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (size_t i = 1; i < prices.size(); ++i) {
        const double dt = t[i] - t[i - 1];
        out.push_back(std::log(prices[i] / prices[i - 1]) / std::sqrt(dt));
    }
    return out;
}

} // namespace

RoughEstimates rough_estimates(const PriceHistory& h, const RollConvention& rc,
                               double long_tenor_years) {
    h.validate();
    GASVAL_REQUIRE(h.size() >= 30, ErrorKind::insufficient_data,
                   "rough estimates need at least 30 observation dates");
    const auto rolling = rolling_series(h, rc);

    std::vector<double> prompt, longp, t;
    prompt.reserve(h.size());
    longp.reserve(h.size());
    t.reserve(h.size());
    for (size_t i = 0; i < h.size(); ++i) {
        const double ti = year_fraction(h.dates[i]);
        const double target = ti + long_tenor_years;
        int best = -1;
        double best_gap = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < h.curves[i].size(); ++j) {
            const double gap = std::abs(year_fraction(rc.expiry(h.curves[i][j].maturity)) - target);
            if (gap < best_gap) {
                best_gap = gap;
                best = static_cast<int>(j);
            }
        }
        GASVAL_REQUIRE(best >= 0 && best_gap <= 1.5, ErrorKind::insufficient_curve,
                       "no contract within 1.5y of the " << long_tenor_years
                                                         << "y tenor on "
                                                         << to_string(h.dates[i]));
        prompt.push_back(rolling[i].prompt);
        longp.push_back(h.curves[i][best].price);
        t.push_back(ti);
    }

    const auto zp = normalized_returns(prompt, t);
    const auto zl = normalized_returns(longp, t);

    RoughEstimates est;
    est.n_obs = static_cast<int>(zp.size());
    est.sigma_s = sample_std(zp);
    est.sigma_l = sample_std(zl);
    if (est.sigma_s == 0.0 || est.sigma_l == 0.0) {
        est.rho = std::numeric_limits<double>::quiet_NaN();
        return est;
    }
    const double mp = mean(zp), ml = mean(zl);
    double cov = 0.0;
    for (size_t i = 0; i < zp.size(); ++i)
        cov += (zp[i] - mp) * (zl[i] - ml);
    cov /= static_cast<double>(zp.size() - 1);
    est.rho = cov / (est.sigma_s * est.sigma_l);
    return est;
}

Eigen::Vector2d invert_factors(const Eigen::VectorXd& z, const Eigen::MatrixXd& H) {
    GASVAL_REQUIRE(H.cols() == 2 && H.rows() == z.size() && H.rows() >= 2, ErrorKind::domain,
                   "loading matrix must be n x 2 with n >= 2");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(1);
    GASVAL_REQUIRE(smin > 1e-12 * std::max(smax, 1e-300), ErrorKind::singular_matrix,
                   "factor loadings are numerically collinear");
    return svd.solve(z);
}

namespace {

struct MleObservation {
    double t = 0.0;            // year fraction of the left date
    double dt = 0.0;           // step to the next date
    std::vector<double> tau;   // time to expiry per maturity
    std::vector<double> z;     // relative price changes
};

struct MleData {
    std::vector<MleObservation> obs;
    double t1 = 0.0, t2 = 0.0;
};

// Parameter vector order: (lambda, mu1, mu2, sigma_s, sigma_l, rho).
constexpr double kLo[6] = {1e-3, -0.49, -0.49, 1e-5, 1e-5, -0.999};
constexpr double kHi[6] = {30.0, 0.49, 0.49, 5.0, 5.0, 0.999};

double mle_objective(const MleData& data, const Eigen::VectorXd& th) {
    for (int k = 0; k < 6; ++k) {
        if (th(k) < kLo[k])
            return 1e10 * (1.0 + kLo[k] - th(k));
        if (th(k) > kHi[k])
            return 1e10 * (1.0 + th(k) - kHi[k]);
    }
    const double lambda = th(0), mu1 = th(1), mu2 = th(2);
    const double ss = th(3), sl = th(4), rho = th(5);
    const double one_m_r2 = 1.0 - rho * rho;

    double quad = 0.0;
    for (const auto& o : data.obs) {
        const double phi = 1.0 + mu1 * std::cos(kTwoPi * (o.t - data.t1)) +
                           mu2 * std::cos(2.0 * kTwoPi * (o.t - data.t2));
        if (phi <= 1e-8)
            return 1e10;
        const double sdt = std::sqrt(o.dt);
        // 2x2 normal equations of z ~ H x.
        double g11 = 0.0, g12 = 0.0, g22 = 0.0, r1 = 0.0, r2 = 0.0;
        for (size_t j = 0; j < o.tau.size(); ++j) {
            const double decay = std::exp(-lambda * o.tau[j]);
            const double h1 = decay * phi * ss * sdt;
            const double h2 = (1.0 - decay) * sl * sdt;
            g11 += h1 * h1;
            g12 += h1 * h2;
            g22 += h2 * h2;
            r1 += h1 * o.z[j];
            r2 += h2 * o.z[j];
        }
        const double det = g11 * g22 - g12 * g12;
        if (det <= 1e-300 || g11 <= 0.0 || g22 <= 0.0)
            return 1e10;
        const double x1 = (g22 * r1 - g12 * r2) / det;
        const double x2 = (g11 * r2 - g12 * r1) / det;
        quad += (x1 * x1 - 2.0 * rho * x1 * x2 + x2 * x2) / one_m_r2;
    }
    const double m = static_cast<double>(data.obs.size());
    return std::log(one_m_r2) + 2.0 * std::log(ss * sl) + quad / m;
}

} // namespace

GabillonFit calibrate_mle(const PriceHistory& h, const GabillonParams& init,
                          const RollConvention& rc, const MleOptions& opt) {
    h.validate();

    MleData data;
    data.t1 = init.t1;
    data.t2 = init.t2;
    for (size_t i = 0; i + 1 < h.size(); ++i) {
        MleObservation o;
        o.t = year_fraction(h.dates[i]);
        o.dt = year_fraction(h.dates[i + 1]) - o.t;
        const auto& cur = h.curves[i];
        for (const auto& cp : cur) {
            if (!(h.dates[i] < rc.expiry(cp.maturity)))
                continue;
            const double next = h.price_at(i + 1, cp.maturity);
            if (next <= 0.0)
                continue;
            o.tau.push_back(year_fraction(rc.expiry(cp.maturity)) - o.t);
            o.z.push_back((next - cp.price) / cp.price);
        }
        if (static_cast<int>(o.z.size()) >= opt.min_common_maturities)
            data.obs.push_back(std::move(o));
    }
    GASVAL_REQUIRE(static_cast<int>(data.obs.size()) >= opt.min_observations,
                   ErrorKind::insufficient_data,
                   "calibration needs at least " << opt.min_observations
                                                 << " usable observation pairs, got "
                                                 << data.obs.size());

    Eigen::VectorXd x0(6);
    x0 << init.lambda, init.mu1, init.mu2, init.sigma_s, init.sigma_l, init.rho;
    for (int k = 0; k < 6; ++k)
        x0(k) = std::clamp(x0(k), kLo[k] + 1e-6, kHi[k] - 1e-6);

    Eigen::VectorXd step(6);
    for (int k = 0; k < 6; ++k)
        step(k) = std::max(0.1 * std::abs(x0(k)), 0.02);

    auto objective = [&data](const Eigen::VectorXd& th) { return mle_objective(data, th); };

    NelderMeadOptions nm_opt;
    nm_opt.max_iter = opt.max_iter;
    nm_opt.f_tol = 1e-13;
    nm_opt.x_tol = 1e-9;
    NelderMeadResult nm = nelder_mead(objective, x0, step, nm_opt);

    GabillonFit fit;
    fit.params = init;
    fit.params.lambda = nm.x(0);
    fit.params.mu1 = nm.x(1);
    fit.params.mu2 = nm.x(2);
    fit.params.sigma_s = nm.x(3);
    fit.params.sigma_l = nm.x(4);
    fit.params.rho = nm.x(5);
    fit.objective = nm.f;
    fit.n_obs = static_cast<int>(data.obs.size());
    fit.iterations = nm.iterations;

    if (!nm.converged)
        throw CalibrationError("curve likelihood optimizer hit the iteration limit", fit.params,
                               nm.f);

    // Wald covariance: (2/m) * H^-1 with H the central-difference Hessian of
    // the averaged objective at the optimum.
    const double m = static_cast<double>(data.obs.size());
    Eigen::MatrixXd hess(6, 6);
    Eigen::VectorXd hstep(6);
    for (int k = 0; k < 6; ++k)
        hstep(k) = std::max(1e-4 * std::abs(nm.x(k)), 1e-6);
    for (int k = 0; k < 6; ++k) {
        for (int l = k; l < 6; ++l) {
            Eigen::VectorXd t0 = nm.x;
            if (k == l) {
                t0(k) = nm.x(k) + hstep(k);
                const double fp = objective(t0);
                t0(k) = nm.x(k) - hstep(k);
                const double fm = objective(t0);
                hess(k, k) = (fp - 2.0 * nm.f + fm) / (hstep(k) * hstep(k));
            } else {
                double v = 0.0;
                for (int sk : {1, -1})
                    for (int sl : {1, -1}) {
                        t0 = nm.x;
                        t0(k) += sk * hstep(k);
                        t0(l) += sl * hstep(l);
                        v += sk * sl * objective(t0);
                    }
                hess(k, l) = hess(l, k) = v / (4.0 * hstep(k) * hstep(l));
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
    fit.covariance.resize(6, 6);
    if (es.eigenvalues().minCoeff() > 0.0) {
        fit.covariance = (2.0 / m) * hess.inverse();
        fit.covariance_ok = true;
    } else {
        // Indefinite Hessian (boundary or flat direction): clamp the spectrum
        // so intervals stay finite, but flag the covariance as unreliable.
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-8);
        fit.covariance =
            (2.0 / m) *
            (es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose());
        fit.covariance_ok = false;
    }
    for (int k = 0; k < 6; ++k) {
        const double se = std::sqrt(std::max(0.0, fit.covariance(k, k)));
        fit.wald_ci[k] = {nm.x(k) - 1.959963984540054 * se, nm.x(k) + 1.959963984540054 * se};
    }
    return fit;
}

} // namespace gasval
