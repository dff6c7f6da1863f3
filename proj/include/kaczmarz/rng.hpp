#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace kaczmarz {

/// Seedable random stream: mt19937_64 with explicit output mappings, so a
/// fixed seed reproduces the exact draw sequence within one build. Doubles
/// use the 53-bit canonical mapping; index draws use rejection sampling to
/// stay unbiased.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform over {0, ..., n-1}.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0)
            throw std::invalid_argument("uniform_index: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(n);
        const std::uint64_t reject_below = (0 - span) % span;  // 2^64 mod n
        for (;;) {
            const std::uint64_t x = engine_();
            if (x >= reject_below) return static_cast<std::size_t>(x % span);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace kaczmarz
