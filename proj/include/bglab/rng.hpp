#pragma once

#include <cstdint>
#include <random>

namespace bglab {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for replica `index` of an experiment seeded with `base`:
///   splitmix64(base + 0x9E3779B97F4A7C15 * (index + 1)).
/// Replicas therefore never depend on scheduling order.
Seed derive_seed(Seed base, std::uint64_t index) noexcept;

inline Rng make_rng(Seed seed) { return Rng{splitmix64(seed)}; }

}  // namespace bglab
