#pragma once

#include <cstdint>
#include <random>

namespace cmmatch {

using Rng = std::mt19937_64;

// Independent sub-streams derived from a single run seed. Pairing and
// decision randomness are kept apart so that every policy sees the same
// realized graph for a given seed.
enum class Stream : std::uint64_t {
    degrees = 1,
    pairing = 2,
    decision = 3,
    simple_retry = 4,
};

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t salt = 0) {
    return mix64(mix64(seed) ^ mix64(static_cast<std::uint64_t>(stream) * 0x632BE59BD9B4E019ULL + salt));
}

inline Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t salt = 0) {
    return Rng(derive_seed(seed, stream, salt));
}

}  // namespace cmmatch
