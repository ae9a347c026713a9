#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qbm {

// Deterministic random stream. All distribution sampling is done by explicit
// inverse-CDF / Box-Muller on top of mt19937_64 so that a given (seed, stream)
// pair yields the same values on every platform and at every worker count.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Independent child stream for ensemble member `index`.
    static RngStream derived(std::uint64_t seed, std::uint64_t index) {
        return RngStream(mix(seed, index));
    }

    // splitmix64 finalizer over the (seed, index) pair
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double exponential(double mean) {
        if (mean <= 0.0) return 0.0;
        return -mean * std::log1p(-uniform());
    }

    // Box-Muller, trigonometric form; consumes exactly two uniforms per pair.
    double normal(double mean, double sd) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double c = std::cos(6.283185307179586476925287 * u2);
        const double s = std::sin(6.283185307179586476925287 * u2);
        spare_ = r * s;
        have_spare_ = true;
        return mean + sd * r * c;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace qbm
