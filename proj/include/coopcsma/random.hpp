#pragma once

#include <cstdint>
#include <random>

namespace coopcsma {

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so every draw goes through these helpers to keep seeds portable.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Seeds a stream from (seed, stream) so that topology placement and
/// contention coin flips of the same replication never share draws.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

enum class RngStream : std::uint64_t { Topology = 1, Contention = 2 };

} // namespace coopcsma
