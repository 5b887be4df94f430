#ifndef THINFILM_RNG_HPP
#define THINFILM_RNG_HPP

#include <cstdint>

namespace thinfilm {

/// SplitMix64 finaliser; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key for an independent stream; every (seed, a, b) triple maps to its own key.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept
{
    return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/// Counter-based uniform draw in (0, 1): the value depends only on (key, counter).
constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) noexcept
{
    const std::uint64_t bits = mix64(key ^ mix64(counter));
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace thinfilm

#endif
