#include "gasval/regression.hpp"

#include "gasval/errors.hpp"

namespace gasval {

void fill_basis(double log_s, double log_p, double y, double* out) {
    out[0] = 1.0;
    out[1] = log_s;
    out[2] = log_p;
    out[3] = y;
    out[4] = log_s * log_s;
    out[5] = log_p * log_p;
    out[6] = y * y;
    out[7] = log_s * log_p;
    out[8] = log_s * y;
    out[9] = log_p * y;
}

Eigen::RowVectorXd basis_row(double log_s, double log_p, double y) {
    Eigen::RowVectorXd r(kBasisSize);
    fill_basis(log_s, log_p, y, r.data());
    return r;
}

RegressionSolver::RegressionSolver(const Eigen::MatrixXd& phi, double ridge) {
    GASVAL_REQUIRE(phi.rows() > phi.cols(), ErrorKind::insufficient_data,
                   "regression needs more rows than basis functions");
    qr_.compute(phi);
    if (qr_.rank() < phi.cols()) {
        ridge_used_ = true;
        phi_t_ = phi.transpose();
        Eigen::MatrixXd gram = phi_t_ * phi;
        gram.diagonal().array() += ridge;
        gram_.compute(gram);
        GASVAL_REQUIRE(gram_.info() == Eigen::Success, ErrorKind::singular_matrix,
                       "ridge normal equations not factorizable");
    }
}

Eigen::VectorXd RegressionSolver::solve(const Eigen::VectorXd& targets) const {
    if (ridge_used_)
        return gram_.solve(phi_t_ * targets);
    return qr_.solve(targets);
}

Eigen::MatrixXd RegressionSolver::solve_many(const Eigen::MatrixXd& targets) const {
    if (ridge_used_)
        return gram_.solve(phi_t_ * targets);
    return qr_.solve(targets);
}

Eigen::VectorXd regress_condexp(const Eigen::MatrixXd& phi, const Eigen::VectorXd& targets,
                                bool* ridge_used) {
    GASVAL_REQUIRE(phi.rows() == targets.size(), ErrorKind::domain,
                   "design and target sizes differ");
    RegressionSolver solver(phi);
    if (ridge_used)
        *ridge_used = solver.ridge_used();
    return solver.solve(targets);
}

} // namespace gasval
