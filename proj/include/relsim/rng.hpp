#pragma once

#include <cstdint>
#include <random>

namespace relsim {

// splitmix64 -- used to derive independent per-trial seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seed for trial i under master seed s. Trial i is replayable in isolation.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index) {
    return splitmix64(master ^ splitmix64(trial_index + 1));
}

inline double uniform01(std::mt19937_64& gen) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen);
}

}  // namespace relsim
