#pragma once

#include <Eigen/Dense>
#include <complex>

namespace rmlab {

// Dense, column-major complex matrices throughout (Eigen's default layout).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

// Max-entry deviation from selfadjointness, ||A - A*||_max.
inline double hermiticity_defect(const ComplexMatrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

// A is treated as Hermitian when ||A - A*||_max <= 1e-12 (1 + ||A||_max).
inline bool is_hermitian(const ComplexMatrix& a, double tol_scale = 1e-12) {
    if (a.rows() != a.cols()) return false;
    if (a.size() == 0) return true;
    return hermiticity_defect(a) <= tol_scale * (1.0 + a.cwiseAbs().maxCoeff());
}

inline bool all_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

}  // namespace rmlab
