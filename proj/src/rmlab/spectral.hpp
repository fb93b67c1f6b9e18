#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmlab/matrix.hpp"

namespace rmlab::spectral {

// Eigenvalues of a Hermitian matrix, ascending. Rejects inputs whose
// hermiticity defect exceeds 1e-12 (1 + ||H||_max).
RealVector eigvals_hermitian(const ComplexMatrix& h);

// Eigendecomposition (ascending values) of a Hermitian matrix; the backbone of
// the functional-calculus operations.
struct HermitianEig {
    RealVector values;
    ComplexMatrix vectors;
};
HermitianEig eig_hermitian(const ComplexMatrix& h);

// Largest backward error ||H v - lambda v||_2 over the computed eigenpairs.
double hermitian_eig_residual(const ComplexMatrix& h);

// Eigenvalues (with multiplicity, solver order) of a general square matrix.
ComplexVector eigvals_general(const ComplexMatrix& m);

std::pair<double, double> extreme_eigs(const ComplexMatrix& h);

// Half-open bins [lo, hi) with the last bin closed; out-of-range samples land
// in underflow/overflow.
struct Histogram {
    RealVector edges;
    std::vector<long> counts;
    long underflow = 0;
    long overflow = 0;

    long total() const;
    std::string to_csv() const;  // edge_lo,edge_hi,count rows
};

Histogram esd_histogram(const RealVector& values, const RealVector& edges);

std::string spectrum_to_csv(const RealVector& values);

// (1/2pi) sqrt(4 - x^2) on [-2, 2], else 0.
double semicircle_density(double x);

// Closed-form CDF of the semicircle distribution.
double semicircle_cdf(double x);

// Mean eigenvalue density h_n(x) of the n x n selfadjoint Gaussian ensemble at
// unit scale, evaluated through the orthonormal Hermite-function recurrence
// phi_{k+1}(t) = sqrt(2/(k+1)) t phi_k(t) - sqrt(k/(k+1)) phi_{k-1}(t).
double gue_level_density(int n, double x);

// Exact E tr_n X^{2k} for the selfadjoint Gaussian ensemble with entry
// variance 1/n, from the closed three-term trace-power recurrence
// (k+2) c_{k+1} = (4k+2) c_k + k (4k^2 - 1) c_{k-1} / n^2.
double gue_trace_moment(int n, int k);

// Joint eigenvalue density (unordered) including its normalization constant;
// supported for 1 <= n <= 3, where the constant comes from Gauss-Hermite
// quadrature (exact for the polynomial-times-Gaussian integrand).
double joint_density_gn(std::span<const double> lambdas);

// (tr_n |M|^p)^{1/p} with the normalized trace; p > 0.
double schatten_norm(const ComplexMatrix& m, double p);

// Largest singular value.
double operator_norm(const ComplexMatrix& m);

// Kolmogorov-Smirnov distance between the empirical CDF of `values` (any
// order) and a reference CDF.
double ks_distance(const RealVector& values, const std::function<double(double)>& cdf);

// Gauss-Hermite rule for weight e^{-t^2} (Golub-Welsch).
struct QuadratureRule {
    RealVector nodes;
    RealVector weights;
};
QuadratureRule gauss_hermite(int points);

}  // namespace rmlab::spectral
