#include "canham/linalg.hpp"

#include "canham/errors.hpp"

namespace canham {

ShiftedLu::ShiftedLu(const Eigen::MatrixXd& m, int sign) {
    Eigen::MatrixXd a = (sign >= 0 ? 1.0 : -1.0) * m;
    a.diagonal().array() += 1.0;
    lu_.compute(a);
    det_ = lu_.determinant();
    double rc = lu_.rcond();
    cond_ = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

Eigen::VectorXd ShiftedLu::solve(const Eigen::VectorXd& rhs) const {
    if (!(cond_ < 1e12)) throw LinearSolveFailure(cond_);
    return lu_.solve(rhs);
}

double det_shifted(const Eigen::MatrixXd& m, int sign) { return ShiftedLu(m, sign).determinant(); }

std::vector<double> sym_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

} // namespace canham
