#pragma once

#include <cmath>
#include <cstdint>

namespace qspi {

// Counter-based deterministic generator (SplitMix64 finalizer over a keyed
// counter). Streams depend only on (key, counter), so parallel and serial
// execution of independent work items produce identical results.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    // Derives a sub-key for work item `index` under a base seed.
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t index) {
        return mix(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
    }

    std::uint64_t next_u64() {
        return mix(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [-pi, pi).
    double next_angle() {
        return -M_PI + 2.0 * M_PI * next_double();
    }

    bool next_bernoulli(double p) { return next_double() < p; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qspi
