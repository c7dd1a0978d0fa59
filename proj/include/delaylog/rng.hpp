#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so work can be split across threads in any
// order without changing the values a given work item sees.

#include "delaylog/map_core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace delaylog {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
        : key_(mix64(mix64(mix64(seed + kGolden) + stream * kGolden + 1) + substream * kGolden + 2))
    {
    }

    std::uint64_t next() { return mix64(key_ + (++counter_) * kGolden); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform over the open unit disk.
    Complex unit_disk()
    {
        double const r = std::sqrt(uniform());
        double const theta = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    std::uint64_t counter() const { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace delaylog
