#include "rmlab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "rmlab/errors.hpp"

namespace rmlab::spectral {

namespace {

void require_square(const ComplexMatrix& m, const char* op) {
    if (m.rows() != m.cols()) throw domain_error(std::string(op) + ": matrix must be square");
}

void require_hermitian(const ComplexMatrix& h, const char* op) {
    require_square(h, op);
    if (!is_hermitian(h))
        throw domain_error(std::string(op) + ": input exceeds hermiticity tolerance (defect " +
                           std::to_string(hermiticity_defect(h)) + ")");
}

RealVector singular_values(const ComplexMatrix& m) {
    if (m.rows() >= 32)
        return Eigen::BDCSVD<ComplexMatrix>(m).singularValues();
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
}

}  // namespace

RealVector eigvals_hermitian(const ComplexMatrix& h) {
    require_hermitian(h, "eigvals_hermitian");
    ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numeric_error("eigvals_hermitian: eigensolver did not converge");
    return solver.eigenvalues();
}

HermitianEig eig_hermitian(const ComplexMatrix& h) {
    require_hermitian(h, "eig_hermitian");
    ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw numeric_error("eig_hermitian: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double hermitian_eig_residual(const ComplexMatrix& h) {
    HermitianEig eig = eig_hermitian(h);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        double r = (h * eig.vectors.col(i) - eig.values[i] * eig.vectors.col(i)).norm();
        worst = std::max(worst, r);
    }
    return worst;
}

ComplexVector eigvals_general(const ComplexMatrix& m) {
    require_square(m, "eigvals_general");
    if (!all_finite(m)) throw domain_error("eigvals_general: non-finite entries");
    if (m.rows() == 0) return ComplexVector();
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw numeric_error("eigvals_general: eigensolver did not converge");
    ComplexVector vals = solver.eigenvalues();
    // Trace identity as a backend sanity guard.
    Complex sum = vals.sum();
    Complex tr = m.trace();
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff() * m.rows());
    if (std::abs(sum - tr) > 1e-8 * scale)
        throw numeric_error("eigvals_general: eigenvalue sum disagrees with trace");
    return vals;
}

std::pair<double, double> extreme_eigs(const ComplexMatrix& h) {
    RealVector vals = eigvals_hermitian(h);
    if (vals.size() == 0) throw domain_error("extreme_eigs: empty matrix");
    return {vals[0], vals[vals.size() - 1]};
}

long Histogram::total() const {
    long t = underflow + overflow;
    for (long c : counts) t += c;
    return t;
}

std::string Histogram::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "lo,hi,count\n";
    out << "-inf," << edges[0] << "," << underflow << "\n";
    for (std::size_t b = 0; b < counts.size(); ++b)
        out << edges[b] << "," << edges[b + 1] << "," << counts[b] << "\n";
    out << edges[edges.size() - 1] << ",inf," << overflow << "\n";
    return out.str();
}

Histogram esd_histogram(const RealVector& values, const RealVector& edges) {
    if (edges.size() < 2) throw domain_error("esd_histogram: need at least two edges");
    for (Eigen::Index i = 0; i + 1 < edges.size(); ++i)
        if (!(edges[i] < edges[i + 1])) throw domain_error("esd_histogram: edges must be strictly ascending");
    Histogram hist;
    hist.edges = edges;
    hist.counts.assign(edges.size() - 1, 0);
    const double lo = edges[0];
    const double hi = edges[edges.size() - 1];
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        double x = values[i];
        if (x < lo) {
            ++hist.underflow;
        } else if (x > hi) {
            ++hist.overflow;
        } else if (x == hi) {
            ++hist.counts.back();  // last bin is closed
        } else {
            auto it = std::upper_bound(edges.data(), edges.data() + edges.size(), x);
            ++hist.counts[(it - edges.data()) - 1];
        }
    }
    return hist;
}

std::string spectrum_to_csv(const RealVector& values) {
    std::ostringstream out;
    out.precision(17);
    for (Eigen::Index i = 0; i < values.size(); ++i) out << values[i] << "\n";
    return out.str();
}

double semicircle_density(double x) {
    if (x < -2.0 || x > 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
           std::asin(0.5 * x) / std::numbers::pi;
}

double gue_level_density(int n, double x) {
    if (n < 1) throw domain_error("gue_level_density: n must be >= 1");
    const double t = std::sqrt(0.5 * n) * x;
    // Orthonormal Hermite functions carry the Gaussian, so every value stays
    // bounded and the recurrence is stable to k ~ 1e3.
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
    double sum = cur * cur;
    for (int k = 0; k < n - 1; ++k) {
        double next = std::sqrt(2.0 / (k + 1)) * t * cur - (k > 0 ? std::sqrt(double(k) / (k + 1)) * prev : 0.0);
        prev = cur;
        cur = next;
        sum += cur * cur;
    }
    return sum / std::sqrt(2.0 * n);
}

double gue_trace_moment(int n, int k) {
    if (n < 1) throw domain_error("gue_trace_moment: n must be >= 1");
    if (k < 0) throw domain_error("gue_trace_moment: k must be >= 0");
    double inv_n2 = 1.0 / (double(n) * n);
    double prev = 1.0;  // E tr_n X^0
    if (k == 0) return prev;
    double cur = 1.0;   // E tr_n X^2
    for (int j = 1; j < k; ++j) {
        double next = ((4.0 * j + 2.0) * cur + j * (4.0 * j * j - 1.0) * prev * inv_n2) / (j + 2.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

QuadratureRule gauss_hermite(int points) {
    if (points < 1) throw domain_error("gauss_hermite: need at least one node");
    RealMatrix jacobi = RealMatrix::Zero(points, points);
    for (int i = 1; i < points; ++i) {
        double b = std::sqrt(0.5 * i);
        jacobi(i, i - 1) = b;
        jacobi(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(jacobi);
    if (solver.info() != Eigen::Success) throw numeric_error("gauss_hermite: Jacobi eigensolve failed");
    QuadratureRule rule;
    rule.nodes = solver.eigenvalues();
    rule.weights.resize(points);
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (int i = 0; i < points; ++i) {
        double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = sqrt_pi * v0 * v0;
    }
    return rule;
}

namespace {

// g_n up to the normalization constant.
double gn_unnormalized(std::span<const double> lambdas) {
    const int n = static_cast<int>(lambdas.size());
    double vandermonde = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = lambdas[j] - lambdas[i];
            vandermonde *= d * d;
        }
    double quad = 0.0;
    for (int i = 0; i < n; ++i) quad += lambdas[i] * lambdas[i];
    return vandermonde * std::exp(-0.5 * n * quad);
}

double gn_constant(int n) {
    static std::array<double, 4> cache{};
    static std::once_flag once;
    std::call_once(once, [] {
        // Substituting lambda_i = sqrt(2/n) t_i makes the integrand a
        // polynomial of degree 2(n-1) per variable times e^{-t^2}; a 12-node
        // rule integrates it exactly.
        QuadratureRule rule = gauss_hermite(12);
        const int pts = static_cast<int>(rule.nodes.size());
        for (int n_ = 1; n_ <= 3; ++n_) {
            double s = std::sqrt(2.0 / n_);
            double integral = 0.0;
            std::array<int, 3> idx{0, 0, 0};
            std::array<double, 3> lam{};
            const long total = static_cast<long>(std::pow(pts, n_));
            for (long flat = 0; flat < total; ++flat) {
                long rest = flat;
                double w = 1.0;
                for (int d = 0; d < n_; ++d) {
                    idx[d] = static_cast<int>(rest % pts);
                    rest /= pts;
                    w *= rule.weights[idx[d]];
                    lam[d] = s * rule.nodes[idx[d]];
                }
                double vandermonde = 1.0;
                for (int i = 0; i < n_; ++i)
                    for (int j = i + 1; j < n_; ++j) {
                        double d = lam[j] - lam[i];
                        vandermonde *= d * d;
                    }
                integral += w * vandermonde;
            }
            integral *= std::pow(s, n_);  // Jacobian of the substitution
            cache[n_] = 1.0 / integral;
        }
    });
    return cache[n];
}

}  // namespace

double joint_density_gn(std::span<const double> lambdas) {
    const int n = static_cast<int>(lambdas.size());
    if (n < 1) throw domain_error("joint_density_gn: need at least one eigenvalue");
    if (n > 3) throw unsupported_error("joint_density_gn: supported only for n <= 3");
    return gn_constant(n) * gn_unnormalized(lambdas);
}

double schatten_norm(const ComplexMatrix& m, double p) {
    require_square(m, "schatten_norm");
    if (!(p > 0.0)) throw domain_error("schatten_norm: p must be positive");
    if (m.rows() == 0) throw domain_error("schatten_norm: empty matrix");
    RealVector sv = singular_values(m);
    double smax = sv.maxCoeff();
    if (smax == 0.0) return 0.0;
    // (tr_n |M|^p)^{1/p} = smax (mean_i (s_i/smax)^p)^{1/p}, stable for large p.
    double mean_pow = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) mean_pow += std::pow(sv[i] / smax, p);
    mean_pow /= sv.size();
    return smax * std::pow(mean_pow, 1.0 / p);
}

double operator_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m).maxCoeff();
}

double ks_distance(const RealVector& values, const std::function<double(double)>& cdf) {
    std::vector<double> sorted(values.data(), values.data() + values.size());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double f = cdf(sorted[i]);
        worst = std::max(worst, std::abs(f - double(i) / n));
        worst = std::max(worst, std::abs(f - double(i + 1) / n));
    }
    return worst;
}

}  // namespace rmlab::spectral
