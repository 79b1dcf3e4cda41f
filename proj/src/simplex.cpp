#include "gasval/simplex.hpp"

#include "gasval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gasval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState { basic, at_lower, at_upper, free_zero };

struct Tableau {
    // Structural columns first, then m artificial unit columns.
    Eigen::MatrixXd a;      // m x (n + m)
    Eigen::VectorXd b;      // m
    Eigen::VectorXd lower;  // n + m
    Eigen::VectorXd upper;  // n + m
    Eigen::VectorXd cost;   // n + m, switched between phases
    Eigen::VectorXd x;      // n + m
    std::vector<int> basis; // m variable indices
    std::vector<VarState> state;
    int n = 0;
    int m = 0;

    int total() const { return n + m; }
};

void recompute_basics(Tableau& t, const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    Eigen::VectorXd rhs = t.b;
    for (int j = 0; j < t.total(); ++j)
        if (t.state[j] != VarState::basic && t.x(j) != 0.0)
            rhs -= t.a.col(j) * t.x(j);
    Eigen::VectorXd xb = lu.solve(rhs);
    for (int i = 0; i < t.m; ++i)
        t.x(t.basis[i]) = xb(i);
}

Eigen::MatrixXd basis_matrix(const Tableau& t) {
    Eigen::MatrixXd bm(t.m, t.m);
    for (int i = 0; i < t.m; ++i)
        bm.col(i) = t.a.col(t.basis[i]);
    return bm;
}

// Returns optimal/unbounded/iteration_limit for the current cost vector.
LpStatus run_simplex(Tableau& t, const LpOptions& opt, int& iters) {
    while (iters < opt.max_iter) {
        ++iters;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix(t));
        recompute_basics(t, lu);

        Eigen::VectorXd cb(t.m);
        for (int i = 0; i < t.m; ++i)
            cb(i) = t.cost(t.basis[i]);
        Eigen::VectorXd y = lu.transpose().solve(cb);

        // Bland: smallest improving index enters.
        int enter = -1;
        double dir = 0.0;
        for (int j = 0; j < t.total(); ++j) {
            if (t.state[j] == VarState::basic)
                continue;
            if (t.lower(j) == t.upper(j))
                continue;
            const double d = t.cost(j) - t.a.col(j).dot(y);
            if (t.state[j] == VarState::at_lower && d < -opt.tol) {
                enter = j;
                dir = 1.0;
            } else if (t.state[j] == VarState::at_upper && d > opt.tol) {
                enter = j;
                dir = -1.0;
            } else if (t.state[j] == VarState::free_zero && std::abs(d) > opt.tol) {
                enter = j;
                dir = d > 0.0 ? -1.0 : 1.0;
            }
            if (enter >= 0)
                break;
        }
        if (enter < 0)
            return LpStatus::optimal;

        Eigen::VectorXd w = lu.solve(t.a.col(enter));

        // x_B moves by -dir * theta * w; entering moves by dir * theta.
        double theta = kInf;
        int leave_pos = -1;
        bool leave_to_upper = false;
        for (int i = 0; i < t.m; ++i) {
            const int bi = t.basis[i];
            const double g = dir * w(i);
            double cap = kInf;
            bool hits_upper = false;
            if (g > opt.pivot_tol && t.lower(bi) > -kInf) {
                cap = (t.x(bi) - t.lower(bi)) / g;
            } else if (g < -opt.pivot_tol && t.upper(bi) < kInf) {
                cap = (t.upper(bi) - t.x(bi)) / (-g);
                hits_upper = true;
            } else {
                continue;
            }
            cap = std::max(cap, 0.0);
            if (cap < theta - 1e-12) {
                theta = cap;
                leave_pos = i;
                leave_to_upper = hits_upper;
            } else if (cap <= theta + 1e-12 && leave_pos >= 0 && bi < t.basis[leave_pos]) {
                // Bland tie-break: smallest variable index leaves.
                theta = std::min(theta, cap);
                leave_pos = i;
                leave_to_upper = hits_upper;
            }
        }
        const double span = t.upper(enter) - t.lower(enter);
        const bool bound_flip = span < kInf && span < theta;
        if (bound_flip)
            theta = span;
        if (theta == kInf)
            return LpStatus::unbounded;

        for (int i = 0; i < t.m; ++i)
            t.x(t.basis[i]) -= dir * theta * w(i);
        t.x(enter) += dir * theta;

        if (bound_flip) {
            t.state[enter] =
                t.state[enter] == VarState::at_lower ? VarState::at_upper : VarState::at_lower;
            continue;
        }
        const int leaving = t.basis[leave_pos];
        t.state[leaving] = leave_to_upper ? VarState::at_upper : VarState::at_lower;
        t.x(leaving) = leave_to_upper ? t.upper(leaving) : t.lower(leaving);
        t.basis[leave_pos] = enter;
        t.state[enter] = VarState::basic;
    }
    return LpStatus::iteration_limit;
}

} // namespace

LpSolution solve_lp(const LpProblem& p, const LpOptions& opt) {
    const int m = static_cast<int>(p.a.rows());
    const int n = static_cast<int>(p.a.cols());
    GASVAL_REQUIRE(p.b.size() == m && p.c.size() == n && p.lower.size() == n &&
                       p.upper.size() == n,
                   ErrorKind::domain, "LP dimensions inconsistent");
    for (int j = 0; j < n; ++j)
        GASVAL_REQUIRE(p.lower(j) <= p.upper(j), ErrorKind::domain,
                       "LP variable " << j << " has empty bound interval");

    Tableau t;
    t.n = n;
    t.m = m;
    t.a.resize(m, n + m);
    t.a.leftCols(n) = p.a;
    t.a.rightCols(m) = Eigen::MatrixXd::Identity(m, m);
    t.b = p.b;
    t.lower.resize(n + m);
    t.upper.resize(n + m);
    t.lower.head(n) = p.lower;
    t.upper.head(n) = p.upper;
    t.x = Eigen::VectorXd::Zero(n + m);
    t.state.assign(n + m, VarState::at_lower);

    for (int j = 0; j < n; ++j) {
        if (p.lower(j) > -kInf) {
            t.x(j) = p.lower(j);
            t.state[j] = VarState::at_lower;
        } else if (p.upper(j) < kInf) {
            t.x(j) = p.upper(j);
            t.state[j] = VarState::at_upper;
        } else {
            t.x(j) = 0.0;
            t.state[j] = VarState::free_zero;
        }
    }

    Eigen::VectorXd residual = p.b;
    for (int j = 0; j < n; ++j)
        if (t.x(j) != 0.0)
            residual -= p.a.col(j) * t.x(j);

    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
    t.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        const int art = n + i;
        t.basis[i] = art;
        t.state[art] = VarState::basic;
        t.x(art) = residual(i);
        if (residual(i) >= 0.0) {
            t.lower(art) = 0.0;
            t.upper(art) = kInf;
            phase1_cost(art) = 1.0;
        } else {
            t.lower(art) = -kInf;
            t.upper(art) = 0.0;
            phase1_cost(art) = -1.0;
        }
    }

    LpSolution sol;
    int iters = 0;

    t.cost = phase1_cost;
    LpStatus s1 = run_simplex(t, opt, iters);
    sol.iterations = iters;
    // Phase 1 minimizes a sum of non-negative terms, so it cannot be unbounded.
    GASVAL_REQUIRE(s1 != LpStatus::unbounded, ErrorKind::domain,
                   "phase-1 simplex reported unbounded");
    if (s1 == LpStatus::iteration_limit) {
        sol.status = s1;
        return sol;
    }
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
        infeas += std::abs(t.x(n + i));
    if (infeas > opt.tol * (1.0 + p.b.cwiseAbs().maxCoeff())) {
        sol.status = LpStatus::infeasible;
        return sol;
    }

    // Artificials are pinned to zero for phase 2.
    for (int i = 0; i < m; ++i) {
        t.lower(n + i) = 0.0;
        t.upper(n + i) = 0.0;
        t.x(n + i) = 0.0;
        if (t.state[n + i] != VarState::basic)
            t.state[n + i] = VarState::at_lower;
    }
    t.cost = Eigen::VectorXd::Zero(n + m);
    t.cost.head(n) = p.c;

    LpStatus s2 = run_simplex(t, opt, iters);
    sol.iterations = iters;
    sol.status = s2;
    if (s2 == LpStatus::optimal) {
        sol.x = t.x.head(n);
        sol.objective = p.c.dot(sol.x);
    }
    return sol;
}

} // namespace gasval
