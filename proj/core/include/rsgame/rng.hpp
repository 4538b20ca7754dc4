#pragma once

#include <cmath>
#include <cstdint>

namespace rsgame {

// SplitMix64 run in counter mode: output k is a pure function of (seed, k),
// so identical seeds reproduce identical streams on every platform.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix(seed_ + kGamma * ++counter_); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Exponential with the given rate (rate > 0).
    double next_exponential(double rate) {
        return -std::log1p(-next_uniform()) / rate;
    }

    // Independent stream for substream k (one per simulated path).
    static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t k) {
        return mix(mix(seed) + kGamma * (k + 1));
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace rsgame
