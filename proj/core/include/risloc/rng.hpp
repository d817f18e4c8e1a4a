#ifndef RISLOC_RNG_HPP
#define RISLOC_RNG_HPP

#include <cstdint>
#include <random>

namespace risloc {

// splitmix64 finalizer; used to derive independent substream seeds so that
// per-cell work gives identical results no matter how it is scheduled.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b), c);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           std::uint64_t d) {
    return mix64(mix64(a, b, c), d);
}

/// Substream generator: deterministic function of the seed path only.
inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(mix64(seed)); }

template <typename... Ids>
std::mt19937_64 make_rng(std::uint64_t seed, Ids... ids) {
    return std::mt19937_64(mix64(seed, static_cast<std::uint64_t>(ids)...));
}

}  // namespace risloc

#endif
