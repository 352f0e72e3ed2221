#pragma once

#include <cmath>
#include <cstdint>

#include "pcurv/types.hpp"

namespace pcurv {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based generator: output k of stream (seed, stream) is
/// splitmix64(key + k * golden) with key = mix(seed, stream). Any draw is
/// addressable by its counter, so shards of a long sequence can be generated
/// independently and still reproduce the sequential sequence bit for bit.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(detail::splitmix64(seed ^ detail::splitmix64(stream + 0x5851F42D4C957F2DULL))) {}

    void set_counter(std::uint64_t counter) { counter_ = counter; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64() {
        return detail::splitmix64(key_ + counter_++ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    Real next_real() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log() argument.
    Real next_real_pos() { return static_cast<Real>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal pair via Box-Muller; consumes exactly two draws.
    std::pair<Real, Real> next_gaussian_pair() {
        const Real u1 = next_real_pos();
        const Real u2 = next_real();
        const Real rad = std::sqrt(-2.0 * std::log(u1));
        const Real ang = 2.0 * M_PI * u2;
        return {rad * std::cos(ang), rad * std::sin(ang)};
    }

    /// Fills v with standard normals; consumes 2*ceil(len/2) draws.
    void fill_gaussian(Vector& v) {
        const Index len = v.size();
        for (Index i = 0; i < len; i += 2) {
            auto [a, b] = next_gaussian_pair();
            v[i] = a;
            if (i + 1 < len) v[i + 1] = b;
        }
    }

    /// Uniform point in the closed ball of radius `radius` about `center`.
    /// Gaussian direction plus U^(1/N) radial law; exact in any dimension.
    Vector next_in_ball(const Vector& center, Real radius) {
        const Index dim = center.size();
        Vector dir(dim);
        fill_gaussian(dir);
        const Real norm = dir.norm();
        if (norm > 0) {
            dir /= norm;
        } else {
            dir.setZero();
            dir[0] = 1.0;
        }
        const Real r = radius * std::pow(next_real(), 1.0 / static_cast<Real>(dim));
        return center + r * dir;
    }

    /// Draws consumed by one next_in_ball() call in dimension `dim`.
    static std::uint64_t ball_draws(Index dim) {
        return 2 * static_cast<std::uint64_t>((dim + 1) / 2) + 1;
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace pcurv
