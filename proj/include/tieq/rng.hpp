#pragma once

#include <cstdint>
#include <random>

namespace tieq {

/// Thin wrapper over mt19937_64 with helpers whose output is identical on
/// every platform (std::uniform_int_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform value in [0, n), n >= 1. Rejection sampling, unbiased.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % n;
    }

    std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double real01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool coin(double p) { return real01() < p; }

private:
    std::mt19937_64 eng_;
};

}  // namespace tieq
