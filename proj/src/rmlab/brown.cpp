#include "rmlab/brown.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

#include "rmlab/ensembles.hpp"
#include "rmlab/errors.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/spectral.hpp"

namespace rmlab::brown {

// ---------------------------------------------------------------------------
// regions

namespace {

struct Disc {
    Complex center;
    double radius;
};
struct HalfPlane {
    Complex normal;
    double offset;
};
struct Rect {
    double x0, x1, y0, y1;
};

}  // namespace

struct Complemented {
    std::shared_ptr<const Region::Node> inner;
};
struct Joined {
    std::vector<std::shared_ptr<const Region::Node>> parts;
};

struct Region::Node {
    std::variant<Disc, HalfPlane, Rect, Complemented, Joined> shape;
};

namespace {

bool region_contains(const Region::Node& node, Complex z);
double region_boundary_distance(const Region::Node& node, Complex z);
std::string region_describe(const Region::Node& node);

}  // namespace

Region Region::disc(Complex center, double radius) {
    if (!(radius >= 0.0)) throw domain_error("region: disc radius must be >= 0");
    return Region(std::make_shared<Node>(Node{Disc{center, radius}}));
}

Region Region::half_plane(Complex unit_normal, double offset) {
    double norm = std::abs(unit_normal);
    if (norm == 0.0) throw domain_error("region: half-plane normal must be nonzero");
    return Region(std::make_shared<Node>(Node{HalfPlane{unit_normal / norm, offset}}));
}

Region Region::rectangle(Complex a, Complex b) {
    Rect r{std::min(a.real(), b.real()), std::max(a.real(), b.real()),
           std::min(a.imag(), b.imag()), std::max(a.imag(), b.imag())};
    return Region(std::make_shared<Node>(Node{r}));
}

Region Region::complement(Region inner) {
    return Region(std::make_shared<Node>(Node{Complemented{std::move(inner.node_)}}));
}

Region Region::union_of(std::vector<Region> parts) {
    if (parts.empty()) throw domain_error("region: union needs at least one part");
    Joined j;
    for (Region& r : parts) j.parts.push_back(std::move(r.node_));
    return Region(std::make_shared<Node>(Node{std::move(j)}));
}

namespace {

bool region_contains(const Region::Node& node, Complex z) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return std::abs(z - s.center) <= s.radius;
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return (std::conj(s.normal) * z).real() <= s.offset;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return z.real() >= s.x0 && z.real() <= s.x1 && z.imag() >= s.y0 && z.imag() <= s.y1;
            } else if constexpr (std::is_same_v<T, Complemented>) {
                return !region_contains(*s.inner, z);
            } else {
                for (const auto& part : s.parts)
                    if (region_contains(*part, z)) return true;
                return false;
            }
        },
        node.shape);
}

double region_boundary_distance(const Region::Node& node, Complex z) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return std::abs(std::abs(z - s.center) - s.radius);
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return std::abs((std::conj(s.normal) * z).real() - s.offset);
            } else if constexpr (std::is_same_v<T, Rect>) {
                double dx = std::min(std::abs(z.real() - s.x0), std::abs(z.real() - s.x1));
                double dy = std::min(std::abs(z.imag() - s.y0), std::abs(z.imag() - s.y1));
                bool in_x = z.real() >= s.x0 && z.real() <= s.x1;
                bool in_y = z.imag() >= s.y0 && z.imag() <= s.y1;
                if (in_x && in_y) return std::min(dx, dy);
                if (in_x) return dy;
                if (in_y) return dx;
                return std::hypot(dx, dy);
            } else if constexpr (std::is_same_v<T, Complemented>) {
                return region_boundary_distance(*s.inner, z);
            } else {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& part : s.parts)
                    best = std::min(best, region_boundary_distance(*part, z));
                return best;
            }
        },
        node.shape);
}

std::string region_describe(const Region::Node& node) {
    std::ostringstream out;
    out.precision(6);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) {
                out << "disc(" << s.center.real() << (s.center.imag() < 0 ? "" : "+") << s.center.imag()
                    << "i, r=" << s.radius << ")";
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                out << "half-plane(n=" << s.normal.real() << (s.normal.imag() < 0 ? "" : "+")
                    << s.normal.imag() << "i, c=" << s.offset << ")";
            } else if constexpr (std::is_same_v<T, Rect>) {
                out << "rect([" << s.x0 << "," << s.x1 << "]x[" << s.y0 << "," << s.y1 << "])";
            } else if constexpr (std::is_same_v<T, Complemented>) {
                out << "complement(" << region_describe(*s.inner) << ")";
            } else {
                out << "union(";
                for (std::size_t i = 0; i < s.parts.size(); ++i)
                    out << (i ? "," : "") << region_describe(*s.parts[i]);
                out << ")";
            }
        },
        node.shape);
    return out.str();
}

}  // namespace

bool Region::contains(Complex z) const { return region_contains(*node_, z); }
double Region::boundary_distance(Complex z) const { return region_boundary_distance(*node_, z); }
std::string Region::describe() const { return region_describe(*node_); }

// ---------------------------------------------------------------------------
// determinants and measures

double fk_determinant(const ComplexMatrix& m, double eps) {
    if (m.rows() != m.cols()) throw domain_error("fk_determinant: matrix must be square");
    if (eps < 0.0) throw domain_error("fk_determinant: eps must be >= 0");
    const Eigen::Index n = m.rows();
    if (n == 0) throw domain_error("fk_determinant: empty matrix");
    if (eps == 0.0) {
        RealVector sv = m.rows() >= 32 ? Eigen::BDCSVD<ComplexMatrix>(m).singularValues()
                                       : Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
        double log_sum = 0.0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv[i] <= 0.0) return 0.0;
            log_sum += std::log(sv[i]);
        }
        return std::exp(log_sum / n);
    }
    ComplexMatrix gram = m.adjoint() * m;
    gram.diagonal().array() += eps;
    Eigen::LLT<ComplexMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw numeric_error("fk_determinant: Cholesky of the shifted Gram matrix failed");
    double log_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_sum += std::log(llt.matrixLLT()(i, i).real());
    return std::exp(log_sum / n);
}

double AtomicMeasure::total_weight() const {
    double t = 0.0;
    for (const Atom& a : atoms) t += a.weight;
    return t;
}

Complex AtomicMeasure::first_moment() const {
    Complex s(0, 0);
    for (const Atom& a : atoms) s += a.weight * a.point;
    return s;
}

double AtomicMeasure::mass_in(const Region& region) const {
    double t = 0.0;
    for (const Atom& a : atoms)
        if (region.contains(a.point)) t += a.weight;
    return t;
}

std::string AtomicMeasure::to_json() const {
    std::ostringstream out;
    out.precision(17);
    out << "{\"atoms\":[";
    for (std::size_t i = 0; i < atoms.size(); ++i)
        out << (i ? "," : "") << "{\"re\":" << atoms[i].point.real() << ",\"im\":" << atoms[i].point.imag()
            << ",\"weight\":" << atoms[i].weight << "}";
    out << "]}";
    return out.str();
}

AtomicMeasure brown_matrix(const ComplexMatrix& m) {
    ComplexVector eigs = spectral::eigvals_general(m);
    const double merge_tol = 1e-8;
    const double w = 1.0 / static_cast<double>(eigs.size());
    AtomicMeasure measure;
    std::vector<Complex> sorted(eigs.data(), eigs.data() + eigs.size());
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (Complex z : sorted) {
        if (!measure.atoms.empty() && std::abs(z - measure.atoms.back().point) <= merge_tol) {
            AtomicMeasure::Atom& last = measure.atoms.back();
            last.point = (last.point * last.weight + z * w) / (last.weight + w);
            last.weight += w;
        } else {
            measure.atoms.push_back({z, w});
        }
    }
    return measure;
}

double GridMeasure::total_mass() const { return mass.sum(); }
double GridMeasure::min_mass() const { return mass.minCoeff(); }

double GridMeasure::mass_in(const Region& region) const {
    double t = 0.0;
    for (int ix = 0; ix < grid.nx; ++ix)
        for (int iy = 0; iy < grid.ny; ++iy)
            if (region.contains(grid.center(ix, iy))) t += mass(ix, iy);
    return t;
}

std::string GridMeasure::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "x,y,mass\n";
    for (int ix = 0; ix < grid.nx; ++ix)
        for (int iy = 0; iy < grid.ny; ++iy) {
            Complex c = grid.center(ix, iy);
            out << c.real() << "," << c.imag() << "," << mass(ix, iy) << "\n";
        }
    return out.str();
}

GridMeasure brown_grid(const ComplexMatrix& m, const GridSpec& grid, double eps, int workers) {
    if (m.rows() != m.cols()) throw domain_error("brown_grid: matrix must be square");
    if (grid.nx < 3 || grid.ny < 3) throw domain_error("brown_grid: need at least 3x3 cells");
    if (!(grid.x1 > grid.x0 && grid.y1 > grid.y0)) throw domain_error("brown_grid: degenerate grid");
    const double hx = grid.hx();
    const double hy = grid.hy();
    const double smoothing = eps > 0.0 ? eps : hx * hy;

    // coverage precondition: spectrum at least 3 cells inside the grid
    ComplexVector eigs = spectral::eigvals_general(m);
    double min_re = std::numeric_limits<double>::infinity(), max_re = -min_re;
    double min_im = min_re, max_im = -min_re;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        min_re = std::min(min_re, eigs[i].real());
        max_re = std::max(max_re, eigs[i].real());
        min_im = std::min(min_im, eigs[i].imag());
        max_im = std::max(max_im, eigs[i].imag());
    }
    if (min_re - grid.x0 < 3 * hx || grid.x1 - max_re < 3 * hx || min_im - grid.y0 < 3 * hy ||
        grid.y1 - max_im < 3 * hy) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "brown_grid: grid must cover the spectrum with a margin of 3 cells; try ["
            << min_re - 4 * hx << "," << max_re + 4 * hx << "] x [" << min_im - 4 * hy << ","
            << max_im + 4 * hy << "]";
        throw domain_error(msg.str());
    }

    // potential on an extended grid (one ring) so every cell has 4 neighbours
    const int ex = grid.nx + 2;
    const int ey = grid.ny + 2;
    RealMatrix phi(ex, ey);
    const Eigen::Index n = m.rows();
    parallel_for(
        static_cast<std::size_t>(ex) * ey,
        [&](std::size_t flat) {
            int ix = static_cast<int>(flat % ex) - 1;
            int iy = static_cast<int>(flat / ex) - 1;
            Complex lambda = grid.center(ix, iy);
            ComplexMatrix shifted = m - lambda * ComplexMatrix::Identity(n, n);
            phi(ix + 1, iy + 1) =
                std::log(fk_determinant(shifted, smoothing)) / (2.0 * std::numbers::pi);
        },
        workers);

    GridMeasure out;
    out.grid = grid;
    out.mass.resize(grid.nx, grid.ny);
    for (int ix = 0; ix < grid.nx; ++ix)
        for (int iy = 0; iy < grid.ny; ++iy) {
            // 5-point Laplacian times cell area; the h^2 factors cancel
            out.mass(ix, iy) = phi(ix, iy + 1) + phi(ix + 2, iy + 1) + phi(ix + 1, iy) +
                               phi(ix + 1, iy + 2) - 4.0 * phi(ix + 1, iy + 1);
        }
    return out;
}

ComplexMatrix random_distortion(const ComplexMatrix& m, double eps, Seed seed) {
    if (m.rows() != m.cols()) throw domain_error("random_distortion: matrix must be square");
    if (eps < 0.0) throw domain_error("random_distortion: eps must be >= 0");
    if (eps == 0.0) return m;
    const int n = static_cast<int>(m.rows());
    ensembles::EnsembleSpec spec = ensembles::EnsembleSpec::ginibre(n);
    ComplexMatrix x = ensembles::sample_ginibre(spec, derive_seed(seed, 0));
    const int max_attempts = 8;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        ComplexMatrix y = ensembles::sample_ginibre(spec, derive_seed(seed, 1 + attempt));
        Eigen::BDCSVD<ComplexMatrix> svd(y);
        double smin = svd.singularValues().minCoeff();
        double smax = svd.singularValues().maxCoeff();
        if (smin > 0.0 && smax / smin < 1e12) {
            // Z = X Y^{-1} solved as Y^T Z^T = X^T
            ComplexMatrix zt = y.transpose().partialPivLu().solve(x.transpose());
            return m + eps * zt.transpose();
        }
    }
    throw numeric_error("random_distortion: could not draw a well-conditioned Y");
}

namespace {

ComplexMatrix matrix_power(const ComplexMatrix& m, int k) {
    ComplexMatrix acc = m;
    for (int i = 1; i < k; ++i) acc = acc * m;
    return acc;
}

}  // namespace

double modified_radius(const ComplexMatrix& m, double p, int k) {
    if (m.rows() != m.cols()) throw domain_error("modified_radius: matrix must be square");
    if (!(p > 0.0)) throw domain_error("modified_radius: p must be positive");
    if (k < 1) throw domain_error("modified_radius: k must be >= 1");
    return spectral::schatten_norm(matrix_power(m, k), p / k);
}

std::string ProjectionSplit::to_json() const {
    std::ostringstream out;
    out.precision(17);
    out << "{\"a\":" << a << ",\"dim\":" << basis.cols() << ",\"n\":" << p.rows() << "}";
    return out.str();
}

namespace {

// Swaps the diagonal entries t(k,k) <-> t(k+1,k+1) of an upper triangular T by
// a unitary similarity (the ztrexc rotation), updating U accordingly.
void swap_adjacent(ComplexMatrix& t, ComplexMatrix& u, Eigen::Index k) {
    const Complex t11 = t(k, k);
    const Complex t12 = t(k, k + 1);
    const Complex t22 = t(k + 1, k + 1);
    // eigenvector of the 2x2 block for t22: (t12, t22 - t11)
    const Complex f = t12;
    const Complex g = t22 - t11;
    const double fn = std::abs(f), gn = std::abs(g);
    if (gn == 0.0) return;  // equal eigenvalues, nothing to move
    const double r = std::hypot(fn, gn);
    // Givens with real cosine: [c, s; -conj(s), c] * (f, g) = (r, 0)
    const double c = fn / r;
    Complex s;
    if (fn == 0.0) {
        s = std::conj(g) / gn;
    } else {
        s = (f / fn) * std::conj(g) / r;
    }
    // rows k, k+1
    for (Eigen::Index j = k; j < t.cols(); ++j) {
        Complex a = t(k, j), b = t(k + 1, j);
        t(k, j) = c * a + s * b;
        t(k + 1, j) = -std::conj(s) * a + c * b;
    }
    // columns k, k+1
    for (Eigen::Index i = 0; i <= k + 1; ++i) {
        Complex a = t(i, k), b = t(i, k + 1);
        t(i, k) = c * a + std::conj(s) * b;
        t(i, k + 1) = -s * a + c * b;
    }
    t(k + 1, k) = Complex(0, 0);
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        Complex a = u(i, k), b = u(i, k + 1);
        u(i, k) = c * a + std::conj(s) * b;
        u(i, k + 1) = -s * a + c * b;
    }
}

}  // namespace

ProjectionSplit invariant_subspace(const ComplexMatrix& m, const Region& region) {
    if (m.rows() != m.cols()) throw domain_error("invariant_subspace: matrix must be square");
    const Eigen::Index n = m.rows();
    if (n == 0) throw domain_error("invariant_subspace: empty matrix");
    Eigen::ComplexSchur<ComplexMatrix> schur(m, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
        throw numeric_error("invariant_subspace: Schur decomposition failed");
    ComplexMatrix t = schur.matrixT();
    ComplexMatrix u = schur.matrixU();

    for (Eigen::Index i = 0; i < n; ++i)
        if (region.boundary_distance(t(i, i)) < 1e-8)
            throw domain_error("invariant_subspace: eigenvalue within 1e-8 of the region boundary (" +
                               region.describe() + ")");

    // selection sort: bubble each selected eigenvalue up to the leading block
    Eigen::Index target = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!region.contains(t(i, i))) continue;
        for (Eigen::Index k = i; k > target; --k) swap_adjacent(t, u, k - 1);
        ++target;
    }
    const Eigen::Index dim = target;

    ProjectionSplit split;
    split.basis = u.leftCols(dim);
    split.p = split.basis * split.basis.adjoint();
    split.t11 = t.topLeftCorner(dim, dim);
    split.t22 = t.bottomRightCorner(n - dim, n - dim);
    split.a = static_cast<double>(dim) / static_cast<double>(n);
    return split;
}

std::vector<double> quasinilpotent_profile(const ComplexMatrix& m, int k_max) {
    if (m.rows() != m.cols()) throw domain_error("quasinilpotent_profile: matrix must be square");
    if (k_max < 1) throw domain_error("quasinilpotent_profile: k_max must be >= 1");
    std::vector<double> out;
    out.reserve(k_max);
    ComplexMatrix power = m;
    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) power = power * m;
        out.push_back(std::pow(spectral::operator_norm(power), 1.0 / k));
    }
    return out;
}

}  // namespace rmlab::brown
