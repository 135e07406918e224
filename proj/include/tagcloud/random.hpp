#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace tagcloud {

/// Platform-independent random source.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so draws are derived from the raw engine output.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Seeds from several words via std::seed_seq (also fully specified).
    Rng(std::initializer_list<std::uint64_t> words) {
        std::vector<std::uint32_t> parts;
        for (auto w : words) {
            parts.push_back(static_cast<std::uint32_t>(w & 0xffffffffu));
            parts.push_back(static_cast<std::uint32_t>(w >> 32));
        }
        std::seed_seq seq(parts.begin(), parts.end());
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, n). n must be > 0.
    std::uint64_t index(std::uint64_t n) {
        // Rejection sampling removes modulo bias.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::mt19937_64 engine_;
};

} // namespace tagcloud
