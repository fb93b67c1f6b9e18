#include "rmlab/ensembles.hpp"

#include <cmath>
#include <string>

#include "rmlab/errors.hpp"

namespace rmlab::ensembles {

const char* kind_name(EnsembleKind kind) noexcept {
    switch (kind) {
        case EnsembleKind::gue: return "gue";
        case EnsembleKind::ginibre: return "ginibre";
        case EnsembleKind::dt_upper: return "dt-upper";
        case EnsembleKind::diag_d0: return "diag-d0";
    }
    return "?";
}

namespace {

void validate(const EnsembleSpec& spec) {
    if (spec.n < 1) throw domain_error("ensemble spec: n must be >= 1");
    if (spec.kind != EnsembleKind::diag_d0 && !(spec.variance > 0.0))
        throw domain_error("ensemble spec: variance must be positive");
}

void require_kind(const EnsembleSpec& spec, EnsembleKind kind, const char* op) {
    if (spec.kind != kind)
        throw domain_error(std::string(op) + ": spec kind is " + kind_name(spec.kind) +
                           ", expected " + kind_name(kind));
}

}  // namespace

EnsembleSpec::EnsembleSpec(EnsembleKind kind, int n) : kind(kind), n(n), variance(n >= 1 ? 1.0 / n : 1.0) {
    validate(*this);
}

EnsembleSpec::EnsembleSpec(EnsembleKind kind, int n, double variance) : kind(kind), n(n), variance(variance) {
    validate(*this);
}

ComplexMatrix sample_gue(const EnsembleSpec& spec, Seed seed) {
    require_kind(spec, EnsembleKind::gue, "sample_gue");
    const int n = spec.n;
    const double diag_sd = std::sqrt(spec.variance);
    Prng rng(seed);
    ComplexMatrix x(n, n);
    for (int j = 0; j < n; ++j) {
        x(j, j) = Complex(diag_sd * rng.gaussian(), 0.0);
        for (int i = 0; i < j; ++i) {
            Complex z = rng.complex_gaussian(spec.variance);
            x(i, j) = z;
            x(j, i) = std::conj(z);
        }
    }
    return x;
}

ComplexMatrix sample_ginibre(const EnsembleSpec& spec, Seed seed) {
    require_kind(spec, EnsembleKind::ginibre, "sample_ginibre");
    const int n = spec.n;
    Prng rng(seed);
    ComplexMatrix y(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) y(i, j) = rng.complex_gaussian(spec.variance);
    return y;
}

ComplexMatrix sample_dt_upper(const EnsembleSpec& spec, Seed seed) {
    require_kind(spec, EnsembleKind::dt_upper, "sample_dt_upper");
    if (spec.n < 2) throw domain_error("sample_dt_upper: n must be >= 2");
    const int n = spec.n;
    Prng rng(seed);
    ComplexMatrix t = ComplexMatrix::Zero(n, n);
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) t(i, j) = rng.complex_gaussian(spec.variance);
    return t;
}

ComplexMatrix make_diag_d0(int n) {
    if (n < 1) throw domain_error("make_diag_d0: n must be >= 1");
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = Complex(double(j + 1) / n, 0.0);
    return d;
}

ComplexMatrix sample(const EnsembleSpec& spec, Seed seed) {
    switch (spec.kind) {
        case EnsembleKind::gue: return sample_gue(spec, seed);
        case EnsembleKind::ginibre: return sample_ginibre(spec, seed);
        case EnsembleKind::dt_upper: return sample_dt_upper(spec, seed);
        case EnsembleKind::diag_d0: return make_diag_d0(spec.n);
    }
    throw domain_error("sample: unknown ensemble kind");
}

}  // namespace rmlab::ensembles
