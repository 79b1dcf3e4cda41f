#pragma once

#include "gasval/calendar.hpp"
#include "gasval/errors.hpp"
#include "gasval/market_data.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace gasval {

/// Two-factor futures curve dynamics with seasonally weighted short vol:
///   dF(t,T)/F(t,T) = e^{-lambda (T-t)} phi(t) sigma_s dW_s
///                    + (1 - e^{-lambda (T-t)}) sigma_l dW_l,
///   phi(t) = 1 + mu1 cos(2 pi (t - t1)) + mu2 cos(4 pi (t - t2)),
///   d<W_s, W_l> = rho dt.
/// t1 and t2 are calendar anchors (January and August), never estimated.
struct GabillonParams {
    double lambda = 1.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double t1 = 0.0;
    double t2 = 7.0 / 12.0;
    double sigma_s = 0.0;
    double sigma_l = 0.0;
    double rho = 0.0;

    double seasonal_vol(double t) const;
    void validate() const;
};

/// Simulated futures prices: layout [path][step][maturity].
struct CurvePathSet {
    SimGrid grid;
    std::vector<YearMonth> maturities;
    std::vector<double> expiry_time; // year_fraction of the expiry date
    std::vector<Date> expiry_date;
    std::vector<int> prompt_index; // per grid step; -1 when no live contract
    int n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> data;

    double price(int path, int step, int mat) const {
        return data[(static_cast<size_t>(path) * grid.dates.size() + step) * maturities.size() +
                    mat];
    }
    double& price(int path, int step, int mat) {
        return data[(static_cast<size_t>(path) * grid.dates.size() + step) * maturities.size() +
                    mat];
    }
    // Prompt contract price; requires a live prompt at `step`.
    double prompt(int path, int step) const;
    double back(int path, int step) const;
};

// Log-Euler scheme: exact initial curve at step 0, every price positive, and
// each contract's discounted drift correction keeps E[F(t,T)] = F(0,T).
// Contracts stop moving once the grid date reaches their expiry.
CurvePathSet simulate_curves(const GabillonParams& p, const std::vector<CurvePoint>& initial_curve,
                             const SimGrid& grid, int n_paths, std::uint64_t seed,
                             const RollConvention& rc = {});

struct RoughEstimates {
    double sigma_s = 0.0;
    double sigma_l = 0.0;
    double rho = 0.0; // NaN when either vol estimate is zero
    int n_obs = 0;
};

// Moment estimates from the prompt series and a rolling long-dated (~4y)
// series; used to seed the likelihood optimizer.
RoughEstimates rough_estimates(const PriceHistory& h, const RollConvention& rc = {},
                               double long_tenor_years = 4.0);

// Least-squares factor increments x solving z ~ H x for an n x 2 loading
// matrix; throws singular_matrix when H is numerically rank deficient.
Eigen::Vector2d invert_factors(const Eigen::VectorXd& z, const Eigen::MatrixXd& H);

struct GabillonFit {
    GabillonParams params;
    double objective = 0.0;
    Eigen::MatrixXd covariance;                      // 6x6, order (lambda, mu1, mu2, sigma_s, sigma_l, rho)
    std::array<std::pair<double, double>, 6> wald_ci; // 95% intervals, same order
    int n_obs = 0;
    int iterations = 0;
    bool covariance_ok = false;
};

class CalibrationError : public Error {
  public:
    CalibrationError(const std::string& msg, GabillonParams best, double objective)
        : Error(ErrorKind::convergence, msg), best_params(best), best_objective(objective) {}
    GabillonParams best_params;
    double best_objective;
};

struct MleOptions {
    int max_iter = 4000;
    int min_common_maturities = 3;
    int min_observations = 100;
};

// Maximum likelihood over (lambda, mu1, mu2, sigma_s, sigma_l, rho) for daily
// curve returns. Per observation the curve return vector is projected on the
// two factor loadings; the Gaussian likelihood of the projected increments has
// objective
//   L = log(1 - rho^2) + 2 log(sigma_s sigma_l) + (1/m) sum x' Sigma^-1 x,
// whose Jacobian term 2 log(sigma_s sigma_l) pins the overall vol scale.
// Covariance of the estimate is (2/m) * inverse Hessian of L; Wald intervals
// derive from its diagonal.
GabillonFit calibrate_mle(const PriceHistory& h, const GabillonParams& init,
                          const RollConvention& rc = {}, const MleOptions& opt = {});

} // namespace gasval
