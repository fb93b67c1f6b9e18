#include "rmlab/prng.hpp"

#include <cmath>

namespace rmlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Prng::Prng(Seed seed) noexcept
    : key0_(static_cast<std::uint32_t>(seed.master)),
      key1_(static_cast<std::uint32_t>(seed.master >> 32)),
      ctr2_(static_cast<std::uint32_t>(seed.stream)),
      ctr3_(static_cast<std::uint32_t>(seed.stream >> 32)) {}

void Prng::refill() noexcept {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = ctr2_;
    std::uint32_t c3 = ctr3_;
    std::uint32_t k0 = key0_;
    std::uint32_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c0, hi0, lo0);
        mulhilo(kMul1, c2, hi1, lo1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    out_[0] = c0;
    out_[1] = c1;
    out_[2] = c2;
    out_[3] = c3;
    avail_ = 4;
    ++block_;
}

std::uint64_t Prng::next_u64() noexcept {
    if (avail_ < 2) refill();
    std::uint64_t hi = out_[avail_ - 1];
    std::uint64_t lo = out_[avail_ - 2];
    avail_ -= 2;
    return (hi << 32) | lo;
}

double Prng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Prng::gaussian() noexcept {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
}

std::complex<double> Prng::complex_gaussian(double variance) noexcept {
    double sd = std::sqrt(0.5 * variance);
    return {sd * gaussian(), sd * gaussian()};
}

}  // namespace rmlab
