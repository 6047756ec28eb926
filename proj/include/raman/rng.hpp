#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace raman {

// Seeded random source with hand-rolled distributions. The std:: distribution
// adaptors are implementation-defined, so sampling through them would break
// the byte-reproducibility contract; everything here consumes mt19937_64
// output in a fixed, documented pattern.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53 bits of entropy.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection-free modulo is fine for the small
    // n used here; bias is < n / 2^64.
    uint64_t uniform_index(uint64_t n) { return gen_() % n; }

    // Box-Muller, cosine branch only: exactly two uniforms per call.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Poisson by CDF inversion for small means (one uniform), normal
    // approximation above mean 50 (one normal = two uniforms).
    int64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean <= 50.0) {
            double u = uniform();
            double p = std::exp(-mean);
            double cdf = p;
            int64_t k = 0;
            while (u > cdf && k < 4096) {
                ++k;
                p *= mean / static_cast<double>(k);
                cdf += p;
            }
            return k;
        }
        double x = std::floor(mean + std::sqrt(mean) * normal() + 0.5);
        return x < 0.0 ? 0 : static_cast<int64_t>(x);
    }

    // Marsaglia-Tsang gamma; the shape < 1 case boosts through shape + 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = uniform();
            if (u <= 0.0) u = 0x1.0p-53;
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double z = normal();
            double v = 1.0 + c * z;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform();
            if (u <= 0.0) u = 0x1.0p-53;
            if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
                return d * v;
            }
        }
    }

    double beta(double a, double b) {
        double x = gamma(a);
        double y = gamma(b);
        return x / (x + y);
    }

    // Derive an independent stream: splitmix64 over (seed, index) so parallel
    // workers and per-cube generators never share state.
    static uint64_t derive_seed(uint64_t seed, uint64_t index) {
        uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace raman
