#pragma once

#include "gasval/futures_model.hpp"
#include "gasval/regression.hpp"
#include "gasval/spot_model.hpp"
#include "gasval/storage.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace gasval {

/// Continuation-value fit for one grid date: per attainable volume node, the
/// regression coefficients predicting the value at that node from the market
/// state one step earlier. Forbidden nodes cannot reach the terminal volume.
struct PolicyStep {
    std::vector<double> nodes;
    Eigen::MatrixXd coeffs; // kBasisSize x nodes
    std::vector<char> forbidden;
};

struct Policy {
    StorageSpec spec;
    SimGrid grid;
    std::vector<PolicyStep> steps; // steps[i] for i in 1..n_steps; steps[0] unused
    double backward_value = 0.0;   // path mean of the value at (t_0, v_start)
    std::uint64_t seed_backward = 0;
    int ridge_fallbacks = 0;
};

// Regression Monte Carlo storage sweep. Works backward from the terminal
// condition (zero at v_end_target, forbidden elsewhere), fits per-node
// continuation values on the state (log S, log P, (S-P)/P), and accumulates
// realized path values under the greedy action; regression output is used for
// the argmax only. Action ties break hold > inject > withdraw.
Policy fit_policy_backward(const CurvePathSet& curves, const SpotPathSet& spot,
                           const StorageSpec& spec);

struct ForwardResult {
    std::vector<double> wealth; // per path
    double mean = 0.0;
    double std_dev = 0.0;
    double std_err = 0.0;
    int n_paths = 0;
    int n_steps = 0;
    std::vector<double> volumes; // [path][step 0..n], filled when recorded
    double max_terminal_gap = 0.0;

    double volume(int path, int step) const {
        return volumes[static_cast<size_t>(path) * (n_steps + 1) + step];
    }
};

// Replays the fitted policy on a path set; transitions are exact, continuation
// values are read at the nearest policy node.
ForwardResult evaluate_policy_forward(const Policy& policy, const CurvePathSet& curves,
                                      const SpotPathSet& spot, bool record_volumes = false);

// Single-path replay on observed history. Every grid date must be present in
// the history (no interpolation).
ForwardResult run_on_historical(const Policy& policy, const PriceHistory& h,
                                const RollConvention& rc = {});

// State basis evaluated for every path at one step: rows are paths, columns
// the polynomial features over (log spot, log prompt, relative spread).
Eigen::MatrixXd state_features(const CurvePathSet& curves, const SpotPathSet& spot, int step);

} // namespace gasval
