// Seedable, splittable random streams with platform-independent output.
//
// Every consumer derives an independent stream from (seed, stream, lane)
// through a splitmix64 key schedule, so realization k of a given run always
// sees the same draws no matter how work is distributed across threads.
// Gaussian variates use Box-Muller rather than std::normal_distribution to
// keep the draw sequence identical across standard libraries.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace g2sim {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

/// One independent random stream: xoshiro256++ seeded from (seed, stream, lane).
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t lane = 0) {
        std::uint64_t key = seed;
        key = detail::splitmix64(key) ^ (stream * 0xD2B74407B1CE6E93ULL);
        key = detail::splitmix64(key) ^ (lane * 0xCA5A826395121157ULL);
        for (auto& word : state_)
            word = detail::splitmix64(key);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in (0, 1]; never returns 0 so log() is safe.
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// One Box-Muller pair: two independent standard normals per two uniforms.
    std::complex<double> gaussian_pair() {
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double phi = 6.283185307179586476925286766559 * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Circular complex normal with unit variance per complex sample.
    std::complex<double> complex_gaussian() {
        const std::complex<double> g = gaussian_pair();
        return {g.real() * 0.7071067811865475244, g.imag() * 0.7071067811865475244};
    }

  private:
    std::uint64_t state_[4];
};

} // namespace g2sim
