#pragma once

#include <cstdint>
#include <random>

namespace facr {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-derived substream: the same (master, stream) pair always yields the
// same generator, independent of how many other streams were consumed.
inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t lane = 0) {
    std::uint64_t s0 = splitmix64(master ^ 0x5851f42d4c957f2dULL);
    std::uint64_t s1 = splitmix64(s0 ^ stream);
    std::uint64_t s2 = splitmix64(s1 ^ lane);
    std::seed_seq seq{static_cast<std::uint32_t>(s0), static_cast<std::uint32_t>(s0 >> 32),
                      static_cast<std::uint32_t>(s1), static_cast<std::uint32_t>(s1 >> 32),
                      static_cast<std::uint32_t>(s2), static_cast<std::uint32_t>(s2 >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace facr
