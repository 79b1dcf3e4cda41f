#pragma once

#include <Eigen/Dense>

namespace gasval {

// Polynomial basis of total degree 2 in (log S, log P, (S-P)/P), intercept first.
inline constexpr int kBasisSize = 10;

void fill_basis(double log_s, double log_p, double y, double* out);
Eigen::RowVectorXd basis_row(double log_s, double log_p, double y);

/// Least squares of many targets against one design matrix. Full-rank designs
/// are solved by column-pivoted QR; rank-deficient ones fall back to ridge
/// (1e-8) normal equations.
class RegressionSolver {
  public:
    explicit RegressionSolver(const Eigen::MatrixXd& phi, double ridge = 1e-8);

    Eigen::VectorXd solve(const Eigen::VectorXd& targets) const;
    Eigen::MatrixXd solve_many(const Eigen::MatrixXd& targets) const; // one column per target
    bool ridge_used() const { return ridge_used_; }

  private:
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
    Eigen::LDLT<Eigen::MatrixXd> gram_;
    Eigen::MatrixXd phi_t_;
    bool ridge_used_ = false;
};

// Conditional-expectation fit: coefficients minimizing |phi * beta - targets|.
Eigen::VectorXd regress_condexp(const Eigen::MatrixXd& phi, const Eigen::VectorXd& targets,
                                bool* ridge_used = nullptr);

} // namespace gasval
