#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rmlab/matrix.hpp"
#include "rmlab/prng.hpp"

namespace rmlab::brown {

// Constructive planar regions with a total, deterministic membership
// predicate; primitive shapes are closed (boundary included).
class Region {
  public:
    static Region disc(Complex center, double radius);
    // {z : Re(conj(normal) z) <= offset}, |normal| = 1.
    static Region half_plane(Complex unit_normal, double offset);
    static Region rectangle(Complex corner_a, Complex corner_b);
    static Region complement(Region inner);
    static Region union_of(std::vector<Region> parts);

    bool contains(Complex z) const;

    // Conservative lower bound on the distance from z to the boundary of any
    // constituent primitive (good enough for ambiguity checks).
    double boundary_distance(Complex z) const;

    std::string describe() const;

    struct Node;  // implementation detail, complete in the .cpp

  private:
    explicit Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Fuglede-Kadison determinant with the normalized trace. eps = 0 evaluates
// |det M|^{1/n} from singular values (0 for singular M); eps > 0 evaluates
// exp(tr_n log(M*M + eps)^{1/2}) through a Cholesky factorization of the
// shifted Gram matrix.
double fk_determinant(const ComplexMatrix& m, double eps);

struct AtomicMeasure {
    struct Atom {
        Complex point;
        double weight;
    };
    std::vector<Atom> atoms;  // sorted by (Re, Im)

    double total_weight() const;
    Complex first_moment() const;            // sum w_i z_i
    double mass_in(const Region& region) const;
    std::string to_json() const;
};

// Eigenvalue counting measure: atoms at the eigenvalues with weight 1/n each,
// merged when closer than 1e-8.
AtomicMeasure brown_matrix(const ComplexMatrix& m);

struct GridSpec {
    double x0, x1, y0, y1;
    int nx = 0, ny = 0;

    double hx() const { return (x1 - x0) / nx; }
    double hy() const { return (y1 - y0) / ny; }
    Complex center(int ix, int iy) const {
        return {x0 + (ix + 0.5) * hx(), y0 + (iy + 0.5) * hy()};
    }
};

struct GridMeasure {
    GridSpec grid;
    RealMatrix mass;  // mass(ix, iy)

    double total_mass() const;
    double min_mass() const;
    double mass_in(const Region& region) const;  // cells whose center is inside
    std::string to_csv() const;                   // x,y,mass rows
};

// Grid estimate of the spectral distribution: evaluates the log-determinant
// potential at cell centers (one extra ring) and applies the 5-point discrete
// Laplacian. eps <= 0 selects the default tie eps = hx*hy (smoothing at cell
// resolution). The grid must cover the spectrum with a margin of >= 3 cells.
GridMeasure brown_grid(const ComplexMatrix& m, const GridSpec& grid, double eps = 0.0,
                       int workers = 0);

// M + eps X Y^{-1} with X, Y independent Ginibre draws (streams 0,1; Y retried
// on streams 2.. while its condition number exceeds 1e12). eps = 0 returns M.
ComplexMatrix random_distortion(const ComplexMatrix& m, double eps, Seed seed);

// Finite approximation ||M^k||_{p/k}^{1/k} of the modified spectral radius.
double modified_radius(const ComplexMatrix& m, double p, int k);

struct ProjectionSplit {
    ComplexMatrix basis;  // orthonormal columns spanning the invariant subspace
    ComplexMatrix p;      // orthogonal projection onto it
    ComplexMatrix t11;    // compression to the subspace (in the basis)
    ComplexMatrix t22;    // compression to the complement
    double a = 0.0;       // normalized trace of p

    std::string to_json() const;
};

// Unique invariant splitting with the spectrum of t11 inside the region and
// the spectrum of t22 outside, computed by a Schur decomposition with
// eigenvalue reordering. Eigenvalues within 1e-8 of the region's boundary are
// a boundary-ambiguity error.
ProjectionSplit invariant_subspace(const ComplexMatrix& m, const Region& region);

// ||((M*)^k M^k)^{1/(2k)}|| = ||M^k||^{1/k} for k = 1..k_max; the sequence
// whose decay to zero detects a quasinilpotent spectral distribution.
std::vector<double> quasinilpotent_profile(const ComplexMatrix& m, int k_max);

}  // namespace rmlab::brown
