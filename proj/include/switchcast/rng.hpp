#pragma once

// Counter-based seedable generator. Output i of a stream is a pure function
// of (key, i), so replicate r of an experiment draws from split(r) and gets
// the same values no matter which worker thread runs it or in what order.
// The mixer is the splitmix64 finalizer (Steele, Lea, Flood 2014).

#include <cstdint>

namespace switchcast {

class CounterRng {
  public:
    static CounterRng seeded(std::uint64_t seed) { return CounterRng(mix(seed ^ kSalt)); }

    // Independent child stream; deterministic in (parent key, stream index).
    CounterRng split(std::uint64_t stream) const {
        return CounterRng(mix(key_ ^ mix(stream * kGolden + kSalt)));
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

    // Uniform on [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1. Rejection-free modulo is fine here:
    // n is tiny (alphabet sizes) next to 2^64, bias < 2^-50.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kSalt = 0x5851F42D4C957F2Dull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace switchcast
