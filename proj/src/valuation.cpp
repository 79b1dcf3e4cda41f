#include "gasval/valuation.hpp"

#include "gasval/errors.hpp"
#include "gasval/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

namespace gasval {

namespace {

constexpr double kNodeTol = 1e-9;

void require_same_grid(const SimGrid& a, const SimGrid& b) {
    GASVAL_REQUIRE(a.dates == b.dates, ErrorKind::grid,
                   "path sets and policy live on different grids");
}

int nearest_node(const std::vector<double>& nodes, double v) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it == nodes.end())
        return static_cast<int>(nodes.size()) - 1;
    if (it == nodes.begin())
        return 0;
    const int hi = static_cast<int>(it - nodes.begin());
    return (v - nodes[hi - 1] <= nodes[hi] - v) ? hi - 1 : hi;
}

// Candidate actions in tie-break preference order.
constexpr Action kActions[3] = {Action::hold, Action::inject, Action::withdraw};

} // namespace

Eigen::MatrixXd state_features(const CurvePathSet& curves, const SpotPathSet& spot, int step) {
    const int n_paths = curves.n_paths;
    Eigen::MatrixXd phi(n_paths, kBasisSize);
    double f[kBasisSize];
    for (int m = 0; m < n_paths; ++m) {
        const double s = spot.spot(m, step);
        const double p = curves.prompt(m, step);
        fill_basis(std::log(s), std::log(p), (s - p) / p, f);
        for (int k = 0; k < kBasisSize; ++k)
            phi(m, k) = f[k];
    }
    return phi;
}

Policy fit_policy_backward(const CurvePathSet& curves, const SpotPathSet& spot,
                           const StorageSpec& spec) {
    require_same_grid(curves.grid, spot.grid);
    GASVAL_REQUIRE(curves.n_paths == spot.n_paths, ErrorKind::domain,
                   "curve and spot path counts differ");
    GASVAL_REQUIRE(curves.n_paths >= 500, ErrorKind::domain,
                   "backward fit needs at least 500 paths");
    spec.validate();
    GASVAL_REQUIRE(spec.start == curves.grid.dates.front() && spec.end == curves.grid.dates.back(),
                   ErrorKind::grid, "path grid does not span the lease window");

    const int n = curves.grid.n_steps();
    const int n_paths = curves.n_paths;
    const auto sets = attainable_sets(spec, n);

    Policy policy;
    policy.spec = spec;
    policy.grid = curves.grid;
    policy.seed_backward = curves.seed;
    policy.steps.resize(n + 1);

    // Terminal condition: value 0 at the target volume, forbidden elsewhere.
    {
        PolicyStep& last = policy.steps[n];
        last.nodes = sets[n];
        last.coeffs = Eigen::MatrixXd::Zero(kBasisSize, last.nodes.size());
        last.forbidden.assign(last.nodes.size(), 1);
        const int target = nearest_node(last.nodes, spec.v_end_target);
        GASVAL_REQUIRE(std::abs(last.nodes[target] - spec.v_end_target) <= kNodeTol,
                       ErrorKind::domain, "v_end_target is not attainable on the volume grid");
        last.forbidden[target] = 0;
    }

    Eigen::MatrixXd values_next = Eigen::MatrixXd::Zero(n_paths, sets[n].size());

    for (int i = n - 1; i >= 0; --i) {
        PolicyStep& next_step = policy.steps[i + 1];
        const auto& cur_nodes = sets[i];
        const int n_next = static_cast<int>(next_step.nodes.size());
        const int n_cur = static_cast<int>(cur_nodes.size());

        // Continuation coefficients for live nodes at t_{i+1}, fit on the state
        // at t_i; the prediction steers the argmax below.
        Eigen::MatrixXd phi = state_features(curves, spot, i);
        RegressionSolver solver(phi);
        if (solver.ridge_used())
            ++policy.ridge_fallbacks;

        std::vector<int> live;
        for (int w = 0; w < n_next; ++w)
            if (!next_step.forbidden[w])
                live.push_back(w);
        GASVAL_REQUIRE(!live.empty(), ErrorKind::domain,
                       "no feasible volume at step " << i + 1);
        Eigen::MatrixXd targets(n_paths, live.size());
        for (size_t c = 0; c < live.size(); ++c)
            targets.col(c) = values_next.col(live[c]);
        Eigen::MatrixXd coef = solver.solve_many(targets);
        for (size_t c = 0; c < live.size(); ++c)
            next_step.coeffs.col(live[c]) = coef.col(c);
        Eigen::MatrixXd predicted = phi * coef; // n_paths x live

        std::vector<int> live_pos(n_next, -1);
        for (size_t c = 0; c < live.size(); ++c)
            live_pos[live[c]] = static_cast<int>(c);

        struct Move {
            double v_next = 0.0;
            int node = -1;
            int pos = -1; // column in predicted, -1 if the landing node is forbidden
        };
        std::vector<std::array<Move, 3>> moves(n_cur);
        for (int l = 0; l < n_cur; ++l) {
            for (int a = 0; a < 3; ++a) {
                const double vn = next_volume(spec, cur_nodes[l], kActions[a]);
                const int w = nearest_node(next_step.nodes, vn);
                moves[l][a] = {vn, w, next_step.forbidden[w] ? -1 : live_pos[w]};
            }
        }

        Eigen::MatrixXd values_cur(n_paths, n_cur);
        std::vector<char> forbidden_cur(n_cur, 0);
        for (int l = 0; l < n_cur; ++l) {
            if (moves[l][0].pos < 0 && moves[l][1].pos < 0 && moves[l][2].pos < 0) {
                forbidden_cur[l] = 1;
                values_cur.col(l).setZero();
                continue;
            }
            for (int m = 0; m < n_paths; ++m) {
                const double s = spot.spot(m, i);
                double best = -std::numeric_limits<double>::infinity();
                int best_a = -1;
                for (int a = 0; a < 3; ++a) {
                    if (moves[l][a].pos < 0)
                        continue;
                    const double score = s * (cur_nodes[l] - moves[l][a].v_next) +
                                         predicted(m, moves[l][a].pos);
                    if (score > best) {
                        best = score;
                        best_a = a;
                    }
                }
                const Move& mv = moves[l][best_a];
                // Realized next-step values accumulate; the regression only
                // picked the action.
                values_cur(m, l) = s * (cur_nodes[l] - mv.v_next) + values_next(m, mv.node);
            }
        }

        policy.steps[i].nodes = cur_nodes;
        policy.steps[i].coeffs = Eigen::MatrixXd::Zero(kBasisSize, n_cur);
        policy.steps[i].forbidden = forbidden_cur;
        values_next.swap(values_cur);
    }

    GASVAL_REQUIRE(policy.steps[0].nodes.size() == 1, ErrorKind::domain,
                   "volume set at the first step must be the start volume alone");
    GASVAL_REQUIRE(policy.steps[0].forbidden[0] == 0, ErrorKind::domain,
                   "v_end_target unreachable from v_start within the lease");
    std::vector<double> v0(values_next.col(0).data(), values_next.col(0).data() + n_paths);
    policy.backward_value = mean(v0);
    return policy;
}

namespace {

struct StateView {
    virtual double spot_at(int path, int step) const = 0;
    virtual double prompt_at(int path, int step) const = 0;
    virtual ~StateView() = default;
};

ForwardResult run_policy(const Policy& policy, const StateView& view, int n_paths,
                         bool record_volumes) {
    const int n = policy.grid.n_steps();
    ForwardResult r;
    r.n_paths = n_paths;
    r.n_steps = n;
    r.wealth.resize(n_paths);
    if (record_volumes)
        r.volumes.resize(static_cast<size_t>(n_paths) * (n + 1));

    double feat[kBasisSize];
    for (int m = 0; m < n_paths; ++m) {
        double v = policy.spec.v_start;
        double wealth = 0.0;
        if (record_volumes)
            r.volumes[static_cast<size_t>(m) * (n + 1)] = v;
        for (int i = 0; i < n; ++i) {
            const double s = view.spot_at(m, i);
            const double p = view.prompt_at(m, i);
            fill_basis(std::log(s), std::log(p), (s - p) / p, feat);
            const PolicyStep& next_step = policy.steps[i + 1];

            double best = -std::numeric_limits<double>::infinity();
            double best_vn = v;
            bool found = false;
            for (const Action a : kActions) {
                const double vn = next_volume(policy.spec, v, a);
                const int w = nearest_node(next_step.nodes, vn);
                if (next_step.forbidden[w])
                    continue;
                double cont = 0.0;
                const double* c = next_step.coeffs.col(w).data();
                for (int k = 0; k < kBasisSize; ++k)
                    cont += c[k] * feat[k];
                const double score = s * (v - vn) + cont;
                if (!found || score > best) {
                    best = score;
                    best_vn = vn;
                    found = true;
                }
            }
            GASVAL_REQUIRE(found, ErrorKind::domain,
                           "no feasible action at step " << i << " from volume " << v);
            wealth += s * (v - best_vn);
            v = best_vn;
            if (record_volumes)
                r.volumes[static_cast<size_t>(m) * (n + 1) + i + 1] = v;
        }
        r.wealth[m] = wealth;
        r.max_terminal_gap = std::max(r.max_terminal_gap, std::abs(v - policy.spec.v_end_target));
    }
    r.mean = mean(r.wealth);
    if (n_paths >= 2) {
        r.std_dev = sample_std(r.wealth);
        r.std_err = r.std_dev / std::sqrt(static_cast<double>(n_paths));
    }
    return r;
}

struct SimView final : StateView {
    const CurvePathSet* curves = nullptr;
    const SpotPathSet* spot = nullptr;
    double spot_at(int path, int step) const override { return spot->spot(path, step); }
    double prompt_at(int path, int step) const override { return curves->prompt(path, step); }
};

struct HistView final : StateView {
    std::vector<double> spot;
    std::vector<double> prompt;
    double spot_at(int, int step) const override { return spot[step]; }
    double prompt_at(int, int step) const override { return prompt[step]; }
};

} // namespace

ForwardResult evaluate_policy_forward(const Policy& policy, const CurvePathSet& curves,
                                      const SpotPathSet& spot, bool record_volumes) {
    require_same_grid(curves.grid, spot.grid);
    require_same_grid(curves.grid, policy.grid);
    GASVAL_REQUIRE(curves.n_paths == spot.n_paths, ErrorKind::domain,
                   "curve and spot path counts differ");
    SimView view;
    view.curves = &curves;
    view.spot = &spot;
    return run_policy(policy, view, curves.n_paths, record_volumes);
}

ForwardResult run_on_historical(const Policy& policy, const PriceHistory& h,
                                const RollConvention& rc) {
    const auto rolling = rolling_series(h, rc);
    std::map<Date, size_t> by_date;
    for (size_t i = 0; i < rolling.size(); ++i)
        by_date[rolling[i].date] = i;

    HistView view;
    const int n = policy.grid.n_steps();
    view.spot.resize(n + 1);
    view.prompt.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        auto it = by_date.find(policy.grid.dates[i]);
        GASVAL_REQUIRE(it != by_date.end(), ErrorKind::gap,
                       "history has no observation on " << to_string(policy.grid.dates[i]));
        view.spot[i] = rolling[it->second].spot;
        view.prompt[i] = rolling[it->second].prompt;
    }
    return run_policy(policy, view, 1, true);
}

} // namespace gasval
