#pragma once

#include <cstdint>

namespace phishforge {

// SplitMix64. One seed reproduces an entire generation run: the same stream
// drives feature sampling and every per-feature choice, in a fixed order.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // next() mod n. Modulo bias is accepted: bounds here are tiny (<= 6)
    // relative to 2^64, and the exact sequence is part of the artifact's
    // reproducibility contract.
    std::uint64_t next_bounded(std::uint64_t n) { return next() % n; }

  private:
    std::uint64_t state_;
};

}  // namespace phishforge
