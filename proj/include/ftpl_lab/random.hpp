#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ftpl_lab {

/// Every stochastic component draws from this engine. std::mt19937_64 is
/// fully specified by the standard, so streams are identical across
/// platforms; the uniform conversion below is ours for the same reason.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2)));
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    return mix_seed(mix_seed(a, b), c);
}

/// FNV-1a, used to fold a policy label into a seed.
constexpr std::uint64_t hash_label(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Uniform variate on the open interval (0, 1) from the top 53 bits.
template <class URBG>
inline double uniform_open(URBG& gen)
{
    const std::uint64_t bits = static_cast<std::uint64_t>(gen()) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

} // namespace ftpl_lab
