#pragma once

#include <charconv>
#include <cstdint>
#include <span>
#include <string>

namespace tagrank {

/// Compensated (Kahan) summation; keeps long sums accurate enough for the
/// 1e-12 row-sum and mass-conservation checks.
inline double kahan_sum(std::span<const double> xs) {
    double sum = 0.0;
    double carry = 0.0;
    for (double x : xs) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

/// Shortest round-trippable decimal rendering. Locale-independent, so
/// repeated emission of the same value is byte-identical.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

/// Small deterministic RNG (splitmix64); used where reproducibility across
/// runs and platforms matters more than statistical quality.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound); bound must be > 0.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

} // namespace tagrank
