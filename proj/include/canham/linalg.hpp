#pragma once

#include <Eigen/Dense>
#include <vector>

namespace canham {

// Factorization of (I + sign*M) for a square matrix M. Backs both the
// Fredholm determinants and the Nystrom collocation solves.
class ShiftedLu {
  public:
    ShiftedLu(const Eigen::MatrixXd& m, int sign);

    double determinant() const { return det_; }
    // 1-norm condition estimate of the factored matrix.
    double condition() const { return cond_; }
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  private:
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double det_ = 0.0;
    double cond_ = 0.0;
};

// det(I + sign*M) without keeping the factorization.
double det_shifted(const Eigen::MatrixXd& m, int sign);

// All eigenvalues of a symmetric matrix, ascending.
std::vector<double> sym_eigenvalues(const Eigen::MatrixXd& m);

} // namespace canham
