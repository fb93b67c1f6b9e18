#include "rmlab/dt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include "rmlab/ensembles.hpp"
#include "rmlab/errors.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/spectral.hpp"

namespace rmlab::dt {

using BigInt = boost::multiprecision::cpp_int;

BigRational dt_moment_formula(const DtMomentQuery& q) {
    if (q.n < 1 || q.k < 1) throw domain_error("dt_moment_formula: n and k must be >= 1");
    BigInt numerator = boost::multiprecision::pow(BigInt(q.n), static_cast<unsigned>(q.n) * q.k);
    BigInt denominator = 1;
    for (int i = 2; i <= q.n * q.k + 1; ++i) denominator *= i;
    return BigRational(numerator, denominator);
}

namespace {

ComplexMatrix matrix_power(const ComplexMatrix& m, int k) {
    ComplexMatrix acc = m;
    for (int i = 1; i < k; ++i) acc = acc * m;
    return acc;
}

double trace_gram_power(const ComplexMatrix& t, int k, int n) {
    ComplexMatrix tk = matrix_power(t, k);
    ComplexMatrix gram = tk.adjoint() * tk;
    const double size = static_cast<double>(t.rows());
    if (n == 1) return gram.trace().real() / size;
    if (n == 2) return gram.squaredNorm() / size;  // tr(A^2) = ||A||_F^2 for Hermitian A
    ComplexMatrix acc = gram;
    for (int i = 1; i < n; ++i) acc = acc * gram;
    return acc.trace().real() / size;
}

}  // namespace

std::pair<double, double> dt_empirical_moment(int size, const DtMomentQuery& q, int replicas,
                                              Seed seed, std::uint64_t stream_base, int workers) {
    if (size < 2) throw domain_error("dt_empirical_moment: size must be >= 2");
    if (replicas < 1) throw domain_error("dt_empirical_moment: replicas must be >= 1");
    if (q.n < 1 || q.k < 1) throw domain_error("dt_empirical_moment: n and k must be >= 1");
    std::vector<double> values(replicas);
    parallel_for(
        static_cast<std::size_t>(replicas),
        [&](std::size_t rep) {
            ComplexMatrix t = ensembles::sample_dt_upper(ensembles::EnsembleSpec::dt_upper(size),
                                                         derive_seed(seed, stream_base + rep));
            values[rep] = trace_gram_power(t, q.k, q.n);
        },
        workers);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= replicas;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = replicas > 1 ? var / (replicas - 1) : 0.0;
    return {mean, std::sqrt(var / replicas)};
}

double log_x_of_v(double v) {
    return std::log(std::sin(v)) - std::log(v) + v * std::cos(v) / std::sin(v);
}

double x_of_v(double v) { return std::exp(log_x_of_v(v)); }

double f_rhs_of_v(double v) {
    double s = std::sin(v);
    return 1.0 - v / std::numbers::pi + s * s / (std::numbers::pi * v);
}

namespace {

// x(v) must be strictly decreasing for the bisection to be valid; checked once.
void validate_monotone_parametrization() {
    static std::once_flag once;
    std::call_once(once, [] {
        const int points = 4096;
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= points; ++i) {
            double v = std::numbers::pi * i / (points + 1);
            double lx = log_x_of_v(v);
            if (!(lx < prev)) throw numeric_error("f_of_x: x(v) is not strictly decreasing on the grid");
            prev = lx;
        }
    });
}

}  // namespace

double f_of_x(double x) {
    const double e = std::exp(1.0);
    if (!(x >= 0.0) || x > e * (1.0 + 1e-15)) throw domain_error("f_of_x: x must lie in [0, e]");
    if (x == 0.0) return 0.0;
    if (x >= e) return 1.0;
    validate_monotone_parametrization();
    const double target = std::log(x);
    double lo = 1e-12;             // x(lo) ~ e
    double hi = std::numbers::pi - 1e-12;  // x(hi) ~ 0
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (log_x_of_v(mid) > target)
            lo = mid;  // x(mid) above target: move right (x decreases in v)
        else
            hi = mid;
        if (hi - lo < 1e-15) break;
    }
    return f_rhs_of_v(0.5 * (lo + hi));
}

ComplexMatrix build_sk(const ComplexMatrix& t, int k) {
    if (t.rows() != t.cols()) throw domain_error("build_sk: matrix must be square");
    if (k < 1) throw domain_error("build_sk: k must be >= 1");
    ComplexMatrix tk = matrix_power(t, k);
    ComplexMatrix gram = tk.adjoint() * tk;
    if (k == 1) return 0.5 * (gram + gram.adjoint());
    spectral::HermitianEig eig = spectral::eig_hermitian(gram);
    RealVector powered(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        powered[i] = std::pow(std::max(0.0, eig.values[i]), 1.0 / k);
    ComplexMatrix sk = eig.vectors * powered.asDiagonal() * eig.vectors.adjoint();
    return 0.5 * double(k) * (sk + sk.adjoint());
}

RealVector sk_spectrum(const ComplexMatrix& t, int k) {
    if (k < 1) throw domain_error("sk_spectrum: k must be >= 1");
    ComplexMatrix tk = matrix_power(t, k);
    RealVector gram_eigs = spectral::eigvals_hermitian(tk.adjoint() * tk);
    RealVector out(gram_eigs.size());
    for (Eigen::Index i = 0; i < gram_eigs.size(); ++i)
        out[i] = k * std::pow(std::max(0.0, gram_eigs[i]), 1.0 / k);
    return out;
}

D0ConvergenceReport d0_convergence_report(int size, const std::vector<int>& k_list, Seed seed,
                                          std::uint64_t stream_base) {
    if (size < 2) throw domain_error("d0_convergence_report: size must be >= 2");
    for (std::size_t i = 1; i < k_list.size(); ++i)
        if (k_list[i] <= k_list[i - 1])
            throw domain_error("d0_convergence_report: k_list must ascend");
    const double e = std::exp(1.0);
    ComplexMatrix t = ensembles::sample_dt_upper(ensembles::EnsembleSpec::dt_upper(size),
                                                 derive_seed(seed, stream_base));
    D0ConvergenceReport report;
    report.size = size;
    for (int k : k_list) {
        RealVector spectrum = sk_spectrum(t, k);
        RealVector mapped(spectrum.size());
        long clipped = 0;
        for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
            double s = spectrum[i];
            if (s > e) {
                ++clipped;
                s = e;
            }
            mapped[i] = f_of_x(s);
        }
        D0ConvergenceRow row;
        row.k = k;
        row.ks_to_uniform = spectral::ks_distance(
            mapped, [](double x) { return std::clamp(x, 0.0, 1.0); });
        row.clipped_fraction = static_cast<double>(clipped) / spectrum.size();
        row.trace_mean = mapped.mean();
        report.rows.push_back(row);
    }
    return report;
}

std::string D0ConvergenceReport::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "k,ks_to_uniform,clipped_fraction,trace_mean\n";
    for (const D0ConvergenceRow& row : rows)
        out << row.k << "," << row.ks_to_uniform << "," << row.clipped_fraction << ","
            << row.trace_mean << "\n";
    return out.str();
}

}  // namespace rmlab::dt
