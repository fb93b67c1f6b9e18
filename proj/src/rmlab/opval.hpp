#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmlab/matrix.hpp"
#include "rmlab/prng.hpp"

namespace rmlab::opval {

// Coefficients (a_0; a_1..a_r) of the linear pencil a_0 (x) 1 + sum a_i (x) X_i.
struct CoefficientFamily {
    ComplexMatrix a0;
    std::vector<ComplexMatrix> a;
    bool selfadjoint = true;

    CoefficientFamily(ComplexMatrix a0, std::vector<ComplexMatrix> a, bool selfadjoint = true);

    int m() const { return static_cast<int>(a0.rows()); }
    int r() const { return static_cast<int>(a.size()); }

    // K = ||a0|| + 4 sum ||a_i||,  C = (pi^2 m^3 / 8) (sum ||a_i||^2)^2.
    double bound_k() const;
    double bound_c() const;

    static CoefficientFamily scalar_semicircle();  // m=1, a0=0, a1=1
};

// Requires Im(lambda) = (lambda - lambda*)/(2i) positive definite.
void require_stieltjes_point(const ComplexMatrix& lambda);

// a0 (x) I_n + sum a_i (x) x_i, an (m n) x (m n) matrix.
ComplexMatrix build_sn(const CoefficientFamily& coeffs, std::span<const ComplexMatrix> xs);

// Monte Carlo estimate of the expected partial trace of the resolvent,
// (id_m (x) tr_n)((lambda (x) 1 - S_n)^{-1}), over `replicas` independent
// draws of the X_i (streams stream_base + rep*r + i).
ComplexMatrix estimate_gn(const CoefficientFamily& coeffs, int n, const ComplexMatrix& lambda,
                          int replicas, Seed seed, std::uint64_t stream_base = 0, int workers = 0);

// Scalar (m = 1) resolvent estimator for the semicircle pencil with a
// control variate: per replica subtract the truncated series
// sum_{k<=cv_order} tr_n(X^k)/lambda^{k+1} and add back its exact expectation
// (closed trace-power recurrence). Unbiased for G_n(lambda); cv_order = 0
// gives the plain estimator.
Complex estimate_gn_scalar(int n, Complex lambda, int replicas, Seed seed, int cv_order = 0,
                           std::uint64_t stream_base = 0, int workers = 0);

struct SolveOptions {
    double tol = 1e-11;
    int max_iterations = 200000;
};

struct SolveResult {
    ComplexMatrix g;
    int iterations = 0;
    double residual = 0.0;

    std::string to_json(const ComplexMatrix& lambda) const;
};

// Solves a0 + sum a_i G a_i + G^{-1} = lambda by the fixed-point map
// G <- (lambda - a0 - sum a_i G a_i)^{-1} from G_0 = lambda^{-1}, halving the
// step when the residual fails to decrease. Every iterate keeps Im G <= 0.
SolveResult solve_g(const CoefficientFamily& coeffs, const ComplexMatrix& lambda,
                    const SolveOptions& options = {});

// Operator norm of a0 + sum a_i g a_i + g^{-1} - lambda.
double master_residual(const CoefficientFamily& coeffs, const ComplexMatrix& g,
                       const ComplexMatrix& lambda);

struct SpectralDensity {
    RealVector energies;
    RealVector density;
    double eta = 0.0;
    double threshold = 0.0;
    std::vector<std::pair<double, double>> support;  // closed intervals

    double distance_to_support(double x) const;
    double total_mass() const;  // trapezoid quadrature over the grid
    std::string to_csv() const;
};

// density(E) = (1/pi) Im tr_m(-G((E + i eta) I)) on the grid; the support
// estimate keeps grid runs where density > max(10 eta, 1e-3).
SpectralDensity reconstruct_spectrum(const CoefficientFamily& coeffs, const RealVector& energies,
                                     double eta, const SolveOptions& options = {});

// Draws one S_n (streams stream_base..stream_base+r-1) and counts eigenvalues
// at distance > epsilon from the support estimate of the deterministic
// transform.
int containment_test(const CoefficientFamily& coeffs, int n, double epsilon, Seed seed,
                     double eta = 1e-3, std::uint64_t stream_base = 0);

// As containment_test but against a precomputed support estimate, for studies
// that sweep many seeds over one pencil.
int count_outside_support(const CoefficientFamily& coeffs, int n, double epsilon,
                          const SpectralDensity& support, Seed seed,
                          std::uint64_t stream_base = 0);

// Extreme eigenvalues of sum_i Y_i* Y_i over r independent Ginibre(n) draws
// (streams stream_base..stream_base+r-1); the block-column Wishart-type pencil.
std::pair<double, double> wishart_extremes(int r, int n, Seed seed, std::uint64_t stream_base = 0);

// Mean and variance across replicas of (tr_m (x) tr_n) f(S_n) for a fixed
// polynomial f given by its coefficients (f[k] multiplies x^k).
std::pair<double, double> trace_poly_stats(const CoefficientFamily& coeffs, int n,
                                           std::span<const double> poly, int replicas, Seed seed,
                                           std::uint64_t stream_base = 0, int workers = 0);

}  // namespace rmlab::opval
