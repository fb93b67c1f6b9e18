#include "rmlab/opval.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmlab/ensembles.hpp"
#include "rmlab/errors.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/spectral.hpp"

namespace rmlab::opval {

namespace {

ComplexMatrix imag_part(const ComplexMatrix& a) {
    return (a - a.adjoint()) / Complex(0.0, 2.0);
}

double max_hermitian_eig(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
}

double min_hermitian_eig(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// sum a_i g a_i
ComplexMatrix quadratic_term(const CoefficientFamily& coeffs, const ComplexMatrix& g) {
    ComplexMatrix acc = ComplexMatrix::Zero(coeffs.m(), coeffs.m());
    for (const ComplexMatrix& ai : coeffs.a) acc += ai * g * ai;
    return acc;
}

ComplexMatrix master_lhs(const CoefficientFamily& coeffs, const ComplexMatrix& g,
                         const ComplexMatrix& lambda) {
    return coeffs.a0 + quadratic_term(coeffs, g) + g.inverse() - lambda;
}

// a (x) I_n
ComplexMatrix kron_identity(const ComplexMatrix& a, int n) {
    const int m = static_cast<int>(a.rows());
    ComplexMatrix out = ComplexMatrix::Zero(m * n, m * n);
    for (int bi = 0; bi < m; ++bi)
        for (int bj = 0; bj < m; ++bj)
            if (a(bi, bj) != Complex(0, 0))
                out.block(bi * n, bj * n, n, n) = a(bi, bj) * ComplexMatrix::Identity(n, n);
    return out;
}

}  // namespace

CoefficientFamily::CoefficientFamily(ComplexMatrix a0_, std::vector<ComplexMatrix> a_, bool selfadjoint_)
    : a0(std::move(a0_)), a(std::move(a_)), selfadjoint(selfadjoint_) {
    if (a0.rows() != a0.cols()) throw domain_error("coefficients: a0 must be square");
    for (const ComplexMatrix& ai : a)
        if (ai.rows() != a0.rows() || ai.cols() != a0.cols())
            throw domain_error("coefficients: all a_i must match a0's dimension");
    if (selfadjoint) {
        if (!is_hermitian(a0)) throw domain_error("coefficients: a0 not selfadjoint");
        for (const ComplexMatrix& ai : a)
            if (!is_hermitian(ai)) throw domain_error("coefficients: a_i not selfadjoint");
    }
}

double CoefficientFamily::bound_k() const {
    double k = spectral::operator_norm(a0);
    for (const ComplexMatrix& ai : a) k += 4.0 * spectral::operator_norm(ai);
    return k;
}

double CoefficientFamily::bound_c() const {
    double s = 0.0;
    for (const ComplexMatrix& ai : a) {
        double norm = spectral::operator_norm(ai);
        s += norm * norm;
    }
    double mm = m();
    return std::numbers::pi * std::numbers::pi * mm * mm * mm / 8.0 * s * s;
}

CoefficientFamily CoefficientFamily::scalar_semicircle() {
    ComplexMatrix a0 = ComplexMatrix::Zero(1, 1);
    ComplexMatrix a1 = ComplexMatrix::Ones(1, 1);
    return CoefficientFamily(a0, {a1}, true);
}

void require_stieltjes_point(const ComplexMatrix& lambda) {
    if (lambda.rows() != lambda.cols()) throw domain_error("stieltjes point: lambda must be square");
    if (min_hermitian_eig(imag_part(lambda)) <= 0.0)
        throw domain_error("stieltjes point: Im(lambda) must be positive definite");
}

ComplexMatrix build_sn(const CoefficientFamily& coeffs, std::span<const ComplexMatrix> xs) {
    if (static_cast<int>(xs.size()) != coeffs.r())
        throw domain_error("build_sn: need exactly r matrices");
    const int m = coeffs.m();
    if (m == 0) throw domain_error("build_sn: empty coefficients");
    const int n = xs.empty() ? 1 : static_cast<int>(xs[0].rows());
    for (const ComplexMatrix& x : xs) {
        if (x.rows() != x.cols()) throw domain_error("build_sn: X_i must be square");
        if (x.rows() != n) throw domain_error("build_sn: all X_i must share one dimension");
        if (coeffs.selfadjoint && !is_hermitian(x))
            throw domain_error("build_sn: X_i not selfadjoint under a selfadjoint family");
    }
    ComplexMatrix s = ComplexMatrix::Zero(m * n, m * n);
    for (int bi = 0; bi < m; ++bi)
        for (int bj = 0; bj < m; ++bj) {
            if (coeffs.a0(bi, bj) != Complex(0, 0))
                s.block(bi * n, bj * n, n, n) += coeffs.a0(bi, bj) * ComplexMatrix::Identity(n, n);
            for (int i = 0; i < coeffs.r(); ++i)
                if (coeffs.a[i](bi, bj) != Complex(0, 0))
                    s.block(bi * n, bj * n, n, n) += coeffs.a[i](bi, bj) * xs[i];
        }
    return s;
}

ComplexMatrix estimate_gn(const CoefficientFamily& coeffs, int n, const ComplexMatrix& lambda,
                          int replicas, Seed seed, std::uint64_t stream_base, int workers) {
    require_stieltjes_point(lambda);
    if (lambda.rows() != coeffs.m()) throw domain_error("estimate_gn: lambda must be m x m");
    if (replicas < 1) throw domain_error("estimate_gn: replicas must be >= 1");
    const int m = coeffs.m();
    const int r = coeffs.r();
    std::vector<ComplexMatrix> partials(replicas);

    parallel_for(
        static_cast<std::size_t>(replicas),
        [&](std::size_t rep) {
            std::vector<ComplexMatrix> xs;
            xs.reserve(r);
            ensembles::EnsembleSpec spec = ensembles::EnsembleSpec::gue(n);
            for (int i = 0; i < r; ++i)
                xs.push_back(ensembles::sample_gue(
                    spec, derive_seed(seed, stream_base + static_cast<std::uint64_t>(rep) * r + i)));
            ComplexMatrix pencil =
                r > 0 ? build_sn(coeffs, xs) : kron_identity(coeffs.a0, n);
            ComplexMatrix resolvent = (kron_identity(lambda, n) - pencil)
                                          .partialPivLu()
                                          .solve(ComplexMatrix::Identity(m * n, m * n));
            ComplexMatrix g(m, m);
            for (int bi = 0; bi < m; ++bi)
                for (int bj = 0; bj < m; ++bj)
                    g(bi, bj) = resolvent.block(bi * n, bj * n, n, n).trace() / double(n);
            partials[rep] = g;
        },
        workers);

    ComplexMatrix mean = ComplexMatrix::Zero(m, m);
    for (const ComplexMatrix& g : partials) mean += g;
    return mean / double(replicas);
}

Complex estimate_gn_scalar(int n, Complex lambda, int replicas, Seed seed, int cv_order,
                           std::uint64_t stream_base, int workers) {
    if (lambda.imag() <= 0.0) throw domain_error("estimate_gn_scalar: Im(lambda) must be positive");
    if (replicas < 1) throw domain_error("estimate_gn_scalar: replicas must be >= 1");
    if (cv_order < 0) throw domain_error("estimate_gn_scalar: cv_order must be >= 0");
    std::vector<Complex> partials(replicas);

    parallel_for(
        static_cast<std::size_t>(replicas),
        [&](std::size_t rep) {
            ComplexMatrix x = ensembles::sample_gue(ensembles::EnsembleSpec::gue(n),
                                                    derive_seed(seed, stream_base + rep));
            RealVector eigs = spectral::eigvals_hermitian(x);
            Complex inv_lambda = 1.0 / lambda;
            Complex acc(0, 0);
            for (int i = 0; i < n; ++i) {
                double mu = eigs[i];
                Complex value = 1.0 / (lambda - mu);
                // subtract sum_{k<=K} mu^k / lambda^{k+1}
                Complex lam_pow = inv_lambda;
                double mu_pow = 1.0;
                for (int k = 0; k <= cv_order; ++k) {
                    value -= mu_pow * lam_pow;
                    mu_pow *= mu;
                    lam_pow *= inv_lambda;
                }
                acc += value;
            }
            partials[rep] = acc / double(n);
        },
        workers);

    Complex mean(0, 0);
    for (const Complex& v : partials) mean += v;
    mean /= double(replicas);
    // add back the exact expectation of the subtracted series (odd moments vanish)
    Complex inv_lambda = 1.0 / lambda;
    Complex lam_pow = inv_lambda;
    for (int k = 0; k <= cv_order; ++k) {
        if (k % 2 == 0) mean += spectral::gue_trace_moment(n, k / 2) * lam_pow;
        lam_pow *= inv_lambda;
    }
    return mean;
}

SolveResult solve_g(const CoefficientFamily& coeffs, const ComplexMatrix& lambda,
                    const SolveOptions& options) {
    if (!coeffs.selfadjoint) throw domain_error("solve_g: coefficients must be selfadjoint");
    require_stieltjes_point(lambda);
    if (lambda.rows() != coeffs.m()) throw domain_error("solve_g: lambda must be m x m");

    ComplexMatrix g = lambda.inverse();
    double residual = spectral::operator_norm(master_lhs(coeffs, g, lambda));
    int iter = 0;
    for (; iter < options.max_iterations && residual > options.tol; ++iter) {
        ComplexMatrix candidate = (lambda - coeffs.a0 - quadratic_term(coeffs, g)).inverse();
        double cand_residual = spectral::operator_norm(master_lhs(coeffs, candidate, lambda));
        if (cand_residual >= residual) {
            // damp oscillation; the Im <= 0 half-space is convex, so the
            // average stays admissible
            candidate = 0.5 * (g + candidate);
            cand_residual = spectral::operator_norm(master_lhs(coeffs, candidate, lambda));
        }
        g = candidate;
        residual = cand_residual;
    }
    if (residual > options.tol)
        throw convergence_error("solve_g: no convergence after " + std::to_string(iter) +
                                " iterations, residual " + std::to_string(residual));
    if (max_hermitian_eig(imag_part(g)) > 1e-10)
        throw numeric_error("solve_g: Im(G) left the negative semidefinite half-space");
    return {g, iter, residual};
}

double master_residual(const CoefficientFamily& coeffs, const ComplexMatrix& g,
                       const ComplexMatrix& lambda) {
    if (g.rows() != coeffs.m() || g.cols() != coeffs.m())
        throw domain_error("master_residual: g must be m x m");
    Eigen::FullPivLU<ComplexMatrix> lu(g);
    if (!lu.isInvertible()) throw domain_error("master_residual: g is singular");
    return spectral::operator_norm(coeffs.a0 + quadratic_term(coeffs, g) + lu.inverse() - lambda);
}

std::string SolveResult::to_json(const ComplexMatrix& lambda) const {
    std::ostringstream out;
    out.precision(17);
    auto matrix_json = [&](const ComplexMatrix& m) {
        std::ostringstream s;
        s.precision(17);
        s << "[";
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            s << (i ? "," : "") << "[";
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                s << (j ? "," : "") << "[" << m(i, j).real() << "," << m(i, j).imag() << "]";
            s << "]";
        }
        s << "]";
        return s.str();
    };
    out << "{\"lambda\":" << matrix_json(lambda) << ",\"g\":" << matrix_json(g)
        << ",\"iterations\":" << iterations << ",\"residual\":" << residual << "}";
    return out.str();
}

double SpectralDensity::distance_to_support(double x) const {
    double best = std::numeric_limits<double>::infinity();
    for (auto [lo, hi] : support) {
        if (x >= lo && x <= hi) return 0.0;
        best = std::min(best, std::min(std::abs(x - lo), std::abs(x - hi)));
    }
    return best;
}

double SpectralDensity::total_mass() const {
    double mass = 0.0;
    for (Eigen::Index i = 0; i + 1 < energies.size(); ++i)
        mass += 0.5 * (density[i] + density[i + 1]) * (energies[i + 1] - energies[i]);
    return mass;
}

std::string SpectralDensity::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "energy,density\n";
    for (Eigen::Index i = 0; i < energies.size(); ++i) out << energies[i] << "," << density[i] << "\n";
    return out.str();
}

SpectralDensity reconstruct_spectrum(const CoefficientFamily& coeffs, const RealVector& energies,
                                     double eta, const SolveOptions& options) {
    if (!(eta > 0.0)) throw domain_error("reconstruct_spectrum: eta must be positive");
    if (energies.size() < 2) throw domain_error("reconstruct_spectrum: need a grid");
    const int m = coeffs.m();
    SpectralDensity out;
    out.energies = energies;
    out.density.resize(energies.size());
    out.eta = eta;
    out.threshold = std::max(10.0 * eta, 1e-3);
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
        ComplexMatrix lambda = Complex(energies[i], eta) * ComplexMatrix::Identity(m, m);
        SolveResult sol = solve_g(coeffs, lambda, options);
        double im_tr = sol.g.trace().imag() / m;
        out.density[i] = std::max(0.0, -im_tr / std::numbers::pi);
    }
    // contiguous grid runs above threshold become closed support intervals
    Eigen::Index i = 0;
    while (i < energies.size()) {
        if (out.density[i] > out.threshold) {
            Eigen::Index j = i;
            while (j + 1 < energies.size() && out.density[j + 1] > out.threshold) ++j;
            out.support.emplace_back(energies[i], energies[j]);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

int containment_test(const CoefficientFamily& coeffs, int n, double epsilon, Seed seed, double eta) {
    if (!(epsilon > 0.0)) throw domain_error("containment_test: epsilon must be positive");
    double radius = spectral::operator_norm(coeffs.a0);
    for (const ComplexMatrix& ai : coeffs.a) radius += 2.0 * spectral::operator_norm(ai);
    radius += 2.0;
    const int points = std::max<int>(401, static_cast<int>(std::ceil(2.0 * radius / 0.01)) + 1);
    RealVector grid = RealVector::LinSpaced(points, -radius, radius);
    SpectralDensity density = reconstruct_spectrum(coeffs, grid, eta);

    std::vector<ComplexMatrix> xs;
    xs.reserve(coeffs.r());
    for (int i = 0; i < coeffs.r(); ++i)
        xs.push_back(ensembles::sample_gue(ensembles::EnsembleSpec::gue(n), derive_seed(seed, i)));
    ComplexMatrix pencil = coeffs.r() > 0 ? build_sn(coeffs, std::span<const ComplexMatrix>(xs))
                                          : kron_identity(coeffs.a0, n);
    RealVector eigs = spectral::eigvals_hermitian(pencil);
    int outside = 0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        if (density.distance_to_support(eigs[i]) > epsilon) ++outside;
    return outside;
}

std::pair<double, double> wishart_extremes(int r, int n, Seed seed) {
    if (r < 1) throw domain_error("wishart_extremes: r must be >= 1");
    if (n < 1) throw domain_error("wishart_extremes: n must be >= 1");
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < r; ++i) {
        ComplexMatrix y =
            ensembles::sample_ginibre(ensembles::EnsembleSpec::ginibre(n), derive_seed(seed, i));
        w += y.adjoint() * y;
    }
    w = 0.5 * (w + w.adjoint());
    return spectral::extreme_eigs(w);
}

std::pair<double, double> trace_poly_stats(const CoefficientFamily& coeffs, int n,
                                           std::span<const double> poly, int replicas, Seed seed,
                                           std::uint64_t stream_base, int workers) {
    if (replicas < 2) throw domain_error("trace_poly_stats: need replicas >= 2");
    const int r = coeffs.r();
    std::vector<double> values(replicas);
    parallel_for(
        static_cast<std::size_t>(replicas),
        [&](std::size_t rep) {
            std::vector<ComplexMatrix> xs;
            xs.reserve(r);
            for (int i = 0; i < r; ++i)
                xs.push_back(ensembles::sample_gue(
                    ensembles::EnsembleSpec::gue(n),
                    derive_seed(seed, stream_base + static_cast<std::uint64_t>(rep) * r + i)));
            ComplexMatrix pencil = build_sn(coeffs, xs);
            RealVector eigs = spectral::eigvals_hermitian(pencil);
            double acc = 0.0;
            for (Eigen::Index e = 0; e < eigs.size(); ++e) {
                double x = eigs[e];
                double fx = 0.0;
                double xp = 1.0;
                for (double c : poly) {
                    fx += c * xp;
                    xp *= x;
                }
                acc += fx;
            }
            values[rep] = acc / eigs.size();
        },
        workers);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= replicas;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (replicas - 1);
    return {mean, var};
}

}  // namespace rmlab::opval
