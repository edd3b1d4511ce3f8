#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace districtnet {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded generator with cheap derived substreams so parallel tasks stay
/// reproducible under a single master seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Independent substream identified by (seed, stream id).
    Rng substream(std::uint64_t id) const {
        return Rng(splitmix64(seed_ ^ splitmix64(id + 0x51ed270b0f4c92b5ULL)));
    }

    std::mt19937_64& engine() { return engine_; }

    double uniform() {
        // 53-bit mantissa in [0,1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    double normal(double mean, double stddev) {
        // Box-Muller, one draw per call (second value discarded for simplicity)
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double truncated_normal(double mean, double stddev, double lo, double hi) {
        for (;;) {
            double x = normal(mean, stddev);
            if (x >= lo && x <= hi) return x;
        }
    }

    /// Poisson by inversion; fine for the request-count means used here.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        double p = std::exp(-mean);
        double cdf = p;
        double u = uniform();
        int k = 0;
        while (u > cdf && k < 100000) {
            ++k;
            p *= mean / k;
            cdf += p;
        }
        return k;
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace districtnet
