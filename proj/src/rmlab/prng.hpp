#pragma once

#include <complex>
#include <cstdint>

namespace rmlab {

// A stream address: (master, stream) fully determines the sample sequence.
// Replicated work derives one stream per unit of work, so values never depend
// on scheduling or worker count.
struct Seed {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const Seed&, const Seed&) = default;
};

// Same master, stream = index. Callers running nested loops (replica x
// generator, or per-size sweeps) must allocate disjoint index ranges; ops
// that consume several streams document how many they use.
inline Seed derive_seed(const Seed& base, std::uint64_t index) noexcept {
    return Seed{base.master, index};
}

// Counter-based generator: Philox-4x32-10 with key = master and counter
// = (draw counter, stream). The value at (master, stream, draw) is a pure
// function of those three words, so streams can be consumed in any order.
//
// Gaussians use the Marsaglia polar method on top of the uniform stream;
// this is the one deterministic choice used everywhere. Sequences are
// bit-identical across runs for a fixed build; across platforms they agree
// except possibly in the last ulp of libm's log/sqrt.
class Prng {
  public:
    explicit Prng(Seed seed) noexcept;

    std::uint64_t next_u64() noexcept;

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() noexcept;

    // Standard normal.
    double gaussian() noexcept;

    // Complex Gaussian with E|z|^2 = variance (Re and Im each N(0, variance/2)).
    std::complex<double> complex_gaussian(double variance) noexcept;

  private:
    void refill() noexcept;

    std::uint32_t key0_, key1_;
    std::uint32_t ctr2_, ctr3_;   // stream words, fixed per Prng
    std::uint64_t block_ = 0;     // draw counter
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int avail_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rmlab
