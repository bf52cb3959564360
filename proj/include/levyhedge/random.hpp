#pragma once

#include <cstdint>
#include <random>

namespace levyhedge {

using Rng = std::mt19937_64;

/// Independent generator for one Monte Carlo path, a pure function of
/// (seed, path index) so results do not depend on scheduling.
inline Rng path_rng(std::uint64_t seed, std::uint64_t path)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                      0x9e3779b9u};
    return Rng(seq);
}

} // namespace levyhedge
