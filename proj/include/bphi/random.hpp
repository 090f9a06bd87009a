#pragma once

#include <cstdint>
#include <random>

namespace bphi {

using Engine = std::mt19937_64;

/// Engine for one (seed, stream) pair. Streams are chunk indices in the
/// samplers, so a chunk's draws do not depend on how chunks are scheduled.
inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9e3779b9U};
    return Engine(seq);
}

}  // namespace bphi
