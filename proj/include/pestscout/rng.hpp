#pragma once

#include <cstdint>
#include <random>

namespace pestscout {

// splitmix64; used to derive independent sub-stream seeds from one master
// seed so that e.g. changing the policy never perturbs the initial
// infestation of a paired repetition.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum class RngStream : std::uint64_t {
    seeding = 1,
    spread = 2,
    policy = 3,
    detection = 4,
    scenario = 5,
};

inline std::mt19937_64 make_stream(std::uint64_t master_seed, RngStream stream) {
    return std::mt19937_64(splitmix64(master_seed ^ (0xabcd0000ULL + static_cast<std::uint64_t>(stream))));
}

// Seed for repetition r of a multi-run experiment.
inline std::uint64_t repetition_seed(std::uint64_t master_seed, int repetition) {
    return splitmix64(master_seed + 0x5eed0000ULL * (static_cast<std::uint64_t>(repetition) + 1));
}

inline bool chance(std::mt19937_64& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace pestscout
