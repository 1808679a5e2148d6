#pragma once

#include <cstdint>
#include <random>

namespace rumorcast {

// splitmix64 step; used to derive independent stream seeds from a master
// seed (chains, simulation replications, per-class shuffles).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive the seed for substream `index` of `master` deterministically.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x8c2f9d4b6a31e075ULL * (index + 1));
    return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t index) {
    return std::mt19937_64(derive_seed(master, index));
}

}  // namespace rumorcast
