#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lvct {

/// One step of splitmix64; advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stream-split rule for per-table and per-replication generators:
/// master seed XOR index. Nested splits mix the parent first
/// (see mix_seed) so sibling levels do not collide.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index)
{
    return master ^ index;
}

/// Single splitmix64 finalization of `seed`.
std::uint64_t mix_seed(std::uint64_t seed);

/// xoshiro256** seeded through splitmix64. Output is identical on every
/// platform for a given seed; normals come from inverting the normal CDF
/// on one uniform, so every variate consumes exactly one 64-bit draw.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next(); }
    result_type next();

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();

    /// Standard normal via inverse CDF.
    double normal();

private:
    std::array<std::uint64_t, 4> s_;
};

}  // namespace lvct
