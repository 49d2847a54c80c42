#pragma once

#include <cstdint>
#include <random>

namespace causalq {

/// Deterministic random source.
///
/// std::uniform_int_distribution is implementation-defined, so every draw here
/// goes through explicit rejection sampling on top of std::mt19937_64 (whose
/// output sequence the standard pins down). Identical seeds therefore produce
/// identical streams on every platform, which the reproducibility contract of
/// the sampling and training pipelines relies on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform integer in [0, n). Unbiased via modulo rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = gen_();
        while (x >= limit) x = gen_();
        return x % n;
    }

    int uniform_index(int n) { return static_cast<int>(uniform_int(static_cast<std::uint64_t>(n))); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

    /// Standard normal via Box-Muller on explicit uniforms.
    double normal() {
        double u1 = uniform_real();
        while (u1 <= 0.0) u1 = uniform_real();
        const double u2 = uniform_real();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace causalq
