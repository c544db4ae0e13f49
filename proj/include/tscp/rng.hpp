#pragma once

#include <cmath>
#include <cstdint>

namespace tscp {

// Finalizer from the splitmix64 generator. Good avalanche, cheap, and easy to
// reproduce in other languages when cross-checking seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Key-derivation step: fold a label into a seed. Chain calls to build
// hierarchical streams, e.g. derive(derive(master, q_index), replica).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) noexcept {
    return mix64(seed ^ (0x9e3779b97f4a7c15ULL + mix64(label)));
}

// Deterministic sequential generator. One instance per logical stream; streams
// with different derived seeds are treated as independent.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0,1): 53 random bits with the low bit forced, so 0.0 is
    // impossible (log() below is safe) and 1.0 is unreachable.
    double uniform01() noexcept {
        return static_cast<double>((next() >> 11) | 1ULL) * 0x1.0p-53;
    }

    // Exponential(1) inter-arrival time.
    double exponential() noexcept { return -std::log(uniform01()); }

  private:
    std::uint64_t state_;
};

// Replica stream contract used by every sweep and experiment driver:
// hash(masterSeed, qIndex, replicaIndex).
constexpr std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t q_index,
                                     std::uint64_t replica_index) noexcept {
    return derive_seed(derive_seed(master_seed, q_index), replica_index);
}

}  // namespace tscp
