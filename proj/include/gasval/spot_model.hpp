#pragma once

#include "gasval/calendar.hpp"
#include "gasval/futures_model.hpp"
#include "gasval/market_data.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gasval {

struct GarchParams {
    double kappa = 0.0;
    double gamma1 = 0.0;
    double alpha1 = 0.0;

    bool stationary() const { return kappa > 0.0 && gamma1 >= 0.0 && alpha1 >= 0.0 &&
                                     gamma1 + alpha1 < 1.0; }
    double unconditional_var() const { return kappa / (1.0 - gamma1 - alpha1); }
    void validate() const;
};

/// Decaying-jump overlay: dY = -beta Y dt + J dN, arrivals thinned to the
/// calendar months in `months`. beta is fixed by configuration, not estimated.
struct SpikeParams {
    double beta = 300.0;
    double intensity = 0.0; // arrivals per year inside the window
    double jump_mean = 0.0; // on log scale
    double jump_std = 0.0;
    std::vector<int> months;
};

/// Daily spot dynamics around the prompt futures price.
/// model 1: log(S_t/S_{t-1}) = a1 + a2 log(P_{t-1}/S_{t-1}) + a3 log(P_t/P_{t-1}) + eps_t
/// model 2: y_t = a1 + a2 y_{t-1} + a3 (P_{t-1}-B_{t-1})/B_{t-1} + eps_t,  S_t = P_t (1+y_t)
/// with GARCH(1,1) innovations and multiplicative spike overlays exp(Y+ + Y-).
struct SpotParams {
    int model = 1;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    GarchParams garch;
    SpikeParams spike_pos{300.0, 0.0, 0.0, 0.0, {1, 2, 6}};
    SpikeParams spike_neg{300.0, 0.0, 0.0, 0.0, {9, 10, 11}};

    void validate() const;
};

struct GarchFilterResult {
    std::vector<double> sigma2; // conditional variance per observation
    std::vector<double> z;      // standardized residuals
};

// sigma2[0] = initial_var, sigma2[t] = kappa + gamma1 sigma2[t-1] + alpha1 eps[t-1]^2.
GarchFilterResult garch_filter(const std::vector<double>& eps, const GarchParams& g,
                               double initial_var);

// Deterministic decay-accumulate kernel: Y[0] = 0, each step decays by
// exp(-beta dt) and adds the jumps scheduled for the step's end date, dropped
// when that date's month is outside the seasonal window.
std::vector<double> spike_path(const SpikeParams& sp, const SimGrid& grid,
                               const std::vector<std::pair<int, double>>& arrivals);

// Poisson arrivals at grid steps; layout [path][step].
std::vector<double> simulate_spikes(const SpikeParams& sp, const SimGrid& grid, int n_paths,
                                    std::uint64_t seed, std::uint64_t tag);

struct SpotPathSet {
    SimGrid grid;
    int n_paths = 0;
    std::uint64_t seed = 0;
    std::vector<double> base;     // [path][step], before spikes
    std::vector<double> spiked;   // exp(Y+ + Y-) * base
    std::vector<double> variance; // conditional variance used at each step
    std::vector<int> floor_count; // per path, model 2 floor events

    double spot(int path, int step) const {
        return spiked[static_cast<size_t>(path) * grid.dates.size() + step];
    }
    double base_spot(int path, int step) const {
        return base[static_cast<size_t>(path) * grid.dates.size() + step];
    }
};

// Spot paths driven by simulated curves; path index p consumes curve path p,
// with spot and spike randomness on independent substreams.
SpotPathSet simulate_spot_paths(const SpotParams& p, const CurvePathSet& curves, double s0,
                                std::uint64_t seed);

//// Regression sample after spike excision: a row for date t is dropped when
// t or t-1 is a flagged spike date.
struct SpotSample {
    Eigen::MatrixXd x; // [1, regressor2, regressor3]
    Eigen::VectorXd resp;
    std::vector<Date> dates;
    int n_excised = 0;
    SpikeDetection detection;
};

SpotSample build_spot_sample(const PriceHistory& h, int model, double spike_k = 3.0,
                             const RollConvention& rc = {});

struct SpotEstimateOptions {
    int min_observations = 500;
    int max_iter = 3000;
    double default_pos_jump_mean = 0.25;
    double default_pos_jump_std = 0.40;
    double default_neg_jump_mean = -0.75;
    double default_neg_jump_std = 0.65;
};

struct SpotEstimate {
    SpotParams params;
    double loglik = 0.0;
    Eigen::MatrixXd covariance; // 6x6 over (a1, a2, a3, kappa, gamma1, alpha1)
    bool covariance_ok = false;
    int n_obs = 0;
    int n_excised = 0;
    SpikeDetection detection;
    std::vector<std::string> warnings;
};

/// Two stage fit: OLS for the regression coefficients on the spike-excised
// sample, then Gaussian quasi-MLE for the GARCH parameters on the residuals.
// Spike laws come from flagged events (log scale); fewer than three events of
// a sign falls back to the configured default law with a warning.
SpotEstimate estimate_spot(const PriceHistory& h, int model, double spike_k = 3.0,
                           const RollConvention& rc = {}, const SpotEstimateOptions& opt = {});

// Gaussian log-likelihood of the excised sample under arbitrary parameters;
// the GARCH recursion starts at the unconditional variance.
double spot_loglik(const PriceHistory& h, const SpotParams& p, double spike_k = 3.0,
                   const RollConvention& rc = {});

std::vector<double> spot_standardized_residuals(const PriceHistory& h, const SpotParams& p,
                                                double spike_k = 3.0,
                                                const RollConvention& rc = {});

} // namespace gasval
