#ifndef RECDFT_RNG_HPP
#define RECDFT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace recdft {

// Counter-based generator: value(seed, stream, n) is a pure function, so any
// sample in any stream can be reproduced without replaying the sequence.
// Core mixer is the splitmix64 finalizer.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t bits(std::uint64_t n) const {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (n * 2ULL + 1ULL) +
                          0xbf58476d1ce4e5b9ULL * stream_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform(std::uint64_t n) const {
        return static_cast<double>(bits(n) >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes counters 2n and 2n+1.
    double gaussian(std::uint64_t n) const {
        double u1 = uniform(2 * n);
        double u2 = uniform(2 * n + 1);
        // keep u1 away from 0 so the log stays finite
        u1 = u1 + 0x1.0p-54;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

// Stream identifiers, one per independent randomness consumer.
namespace rng_stream {
constexpr std::uint64_t phases = 1;
constexpr std::uint64_t gaussian = 2;
constexpr std::uint64_t impulse = 3;
}  // namespace rng_stream

}  // namespace recdft

#endif
