#pragma once

#include <cstdint>

namespace cvnoise {

// Counter-based generator: every draw is a pure function of (key, counter), so
// streams can be split per sample and results do not depend on scheduling.
// The mixing function is the SplitMix64 finalizer.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    CounterRng split(std::uint64_t stream) const { return CounterRng(key_, stream); }

    std::uint64_t bits(std::uint64_t counter) const;
    double uniform(std::uint64_t counter) const;  // [0, 1)
    double normal(std::uint64_t counter) const;   // standard normal, Box-Muller on counters 2c, 2c+1

    std::uint64_t next_bits() { return bits(ctr_++); }
    double next_uniform() { return uniform(ctr_++); }
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }
    double next_normal() { return normal(ctr_++); }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace cvnoise
