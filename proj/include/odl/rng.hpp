#pragma once

#include <cstdint>
#include <random>

namespace odl {

/// splitmix64 finalizer; decorrelates structured counter inputs.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Counter-based seed for (seed, replication, batch). Every (rep, batch)
/// cell gets an independent stream, so replications can run in any order or
/// in parallel and still reproduce bit-identically.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t rep, std::uint64_t batch) {
    return mix64(mix64(mix64(seed) ^ rep) ^ batch);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t rep, std::uint64_t batch) {
    return std::mt19937_64(derive_seed(seed, rep, batch));
}

} // namespace odl
