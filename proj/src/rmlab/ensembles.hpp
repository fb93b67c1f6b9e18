#pragma once

#include "rmlab/matrix.hpp"
#include "rmlab/prng.hpp"

namespace rmlab::ensembles {

enum class EnsembleKind { gue, ginibre, dt_upper, diag_d0 };

const char* kind_name(EnsembleKind kind) noexcept;

// Which family to draw. variance defaults to 1/n; diag_d0 ignores it.
struct EnsembleSpec {
    EnsembleKind kind;
    int n;
    double variance;

    EnsembleSpec(EnsembleKind kind, int n);                    // variance = 1/n
    EnsembleSpec(EnsembleKind kind, int n, double variance);

    static EnsembleSpec gue(int n) { return {EnsembleKind::gue, n}; }
    static EnsembleSpec gue(int n, double variance) { return {EnsembleKind::gue, n, variance}; }
    static EnsembleSpec ginibre(int n) { return {EnsembleKind::ginibre, n}; }
    static EnsembleSpec dt_upper(int n) { return {EnsembleKind::dt_upper, n}; }
};

// Selfadjoint Gaussian matrix: diagonal entries real N(0, variance), off-diagonal
// complex with Re and Im each N(0, variance/2), mirrored exactly. Entries are
// drawn column by column over the upper triangle (diagonal first in each column).
ComplexMatrix sample_gue(const EnsembleSpec& spec, Seed seed);

// n^2 i.i.d. complex Gaussian entries with E|z|^2 = 1/n, drawn in column order.
ComplexMatrix sample_ginibre(const EnsembleSpec& spec, Seed seed);

// Strictly upper triangular, n(n-1)/2 i.i.d. complex Gaussians with E|t|^2 = 1/n;
// the diagonal and lower triangle are exact zeros. Requires n >= 2.
ComplexMatrix sample_dt_upper(const EnsembleSpec& spec, Seed seed);

// diag(1/n, 2/n, ..., 1).
ComplexMatrix make_diag_d0(int n);

// Dispatch on spec.kind (diag_d0 ignores the seed).
ComplexMatrix sample(const EnsembleSpec& spec, Seed seed);

}  // namespace rmlab::ensembles
