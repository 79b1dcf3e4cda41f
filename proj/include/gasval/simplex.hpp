#pragma once

#include <Eigen/Dense>

namespace gasval {

/// minimize c'x subject to A x = b, lower <= x <= upper.
/// Bounds may be +-inf; lower == upper pins a variable.
struct LpProblem {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
};

struct LpOptions {
    int max_iter = 20000;
    double tol = 1e-9;       // reduced-cost and feasibility tolerance
    double pivot_tol = 1e-11;
};

// Dense two-phase bounded-variable simplex; Bland's rule throughout, so it
// terminates on degenerate problems.
LpSolution solve_lp(const LpProblem& p, const LpOptions& opt = {});

} // namespace gasval
