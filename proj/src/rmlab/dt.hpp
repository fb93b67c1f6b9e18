#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmlab/matrix.hpp"
#include "rmlab/prng.hpp"

namespace rmlab::dt {

using BigRational = boost::multiprecision::cpp_rational;

// Moment order n and power k of tr((T^k)* T^k)^n.
struct DtMomentQuery {
    int n = 1;
    int k = 1;
};

// Exact n^{nk} / (nk+1)! .
BigRational dt_moment_formula(const DtMomentQuery& q);

// Monte Carlo tr_n(((T^k)* T^k)^n) over strictly upper triangular Gaussian
// draws of the given size (replica r uses stream stream_base + r). Returns
// (mean, standard error).
std::pair<double, double> dt_empirical_moment(int size, const DtMomentQuery& q, int replicas,
                                              Seed seed, std::uint64_t stream_base = 0,
                                              int workers = 0);

// Parametrization x(v) = (sin v / v) exp(v cot v), strictly decreasing from e
// (v -> 0+) to 0 (v -> pi-). log_x_of_v stays finite where x underflows.
double x_of_v(double v);
double log_x_of_v(double v);

// Right-hand side 1 - v/pi + sin(v)^2/(pi v).
double f_rhs_of_v(double v);

// The strictly increasing F: [0, e] -> [0, 1] defined by F(x(v)) = f_rhs(v),
// inverted by bisection in v; endpoints F(0) = 0, F(e) = 1 exact.
double f_of_x(double x);

// S_k = k ((T^k)* T^k)^{1/k}, Hermitian positive semidefinite.
ComplexMatrix build_sk(const ComplexMatrix& t, int k);

// Spectrum of S_k without forming the root: k * mu^{1/k} over the
// eigenvalues mu of (T^k)* T^k.
RealVector sk_spectrum(const ComplexMatrix& t, int k);

struct D0ConvergenceRow {
    int k = 0;
    double ks_to_uniform = 0.0;   // eigenvalue law of F(S_k) vs uniform[0,1]
    double clipped_fraction = 0.0;  // eigenvalues of S_k above e, mapped to 1
    double trace_mean = 0.0;        // tr_n F(S_k)
};

struct D0ConvergenceReport {
    int size = 0;
    std::vector<D0ConvergenceRow> rows;

    std::string to_csv() const;
};

// One T draw (stream stream_base), evaluated at each k in ascending k_list.
D0ConvergenceReport d0_convergence_report(int size, const std::vector<int>& k_list, Seed seed,
                                          std::uint64_t stream_base = 0);

}  // namespace rmlab::dt
