#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace edsim {

// 64-bit FNV-1a over raw bytes. Stable across platforms and runs; used for
// seed derivation and content digests (not a cryptographic hash).
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t basis = 0xcbf29ce484222325ull) {
    std::uint64_t h = basis;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// SplitMix64 finalizer, applied on top of FNV-1a for avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Small deterministic PRNG stream for jitter and the procedural mock.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return n ? next() % n : 0; }

private:
    std::uint64_t state_;
};

std::string to_hex16(std::uint64_t value);

}  // namespace edsim
