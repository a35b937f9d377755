// Counter-based random numbers: every draw is a pure function of
// (seed, stream, block, index), so any repetition or trial can be regenerated alone.
#pragma once

#include <cmath>
#include <cstdint>

#include "cazac/types.hpp"

namespace cazac {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Streams used by the simulator; distinct so noise and target draws never alias.
enum class RngStream : std::uint64_t {
    noise = 1,
    targets = 2,
    parameters = 3,
    trial = 4,
};

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

    [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }

    [[nodiscard]] constexpr std::uint64_t bits(RngStream stream, std::uint64_t block,
                                               std::uint64_t index, std::uint64_t lane = 0) const
    {
        std::uint64_t h = splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(stream)));
        h = splitmix64(h ^ splitmix64(block + 0x632be59bd9b4e019ULL));
        h = splitmix64(h ^ splitmix64(index + 0x8cb92ba72f3d8dd7ULL));
        return splitmix64(h ^ lane);
    }

    /// Uniform on [0, 1) with 53 random bits.
    [[nodiscard]] double uniform(RngStream stream, std::uint64_t block, std::uint64_t index,
                                 std::uint64_t lane = 0) const
    {
        return static_cast<double>(bits(stream, block, index, lane) >> 11) * 0x1.0p-53;
    }

    /// Circular complex Gaussian CN(0, variance) via Box-Muller on two lanes.
    [[nodiscard]] cplx complex_normal(RngStream stream, std::uint64_t block, std::uint64_t index,
                                      double variance) const
    {
        const double u1 = 1.0 - uniform(stream, block, index, 0); // (0, 1]
        const double u2 = uniform(stream, block, index, 1);
        const double radius = std::sqrt(-variance * std::log(u1));
        return std::polar(radius, 2.0 * pi * u2);
    }

    /// Child generator for an independent sub-experiment (e.g. one trial).
    [[nodiscard]] constexpr CounterRng derive(std::uint64_t index) const
    {
        return CounterRng(bits(RngStream::trial, 0, index));
    }

private:
    std::uint64_t seed_;
};

} // namespace cazac
