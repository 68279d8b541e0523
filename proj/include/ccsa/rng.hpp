#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ccsa {

/**
 * @brief Deterministic random stream used throughout the project.
 *
 * Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
 * derives uniforms/Bernoullis by hand instead of through std distributions,
 * whose algorithms differ between standard libraries. Same seed, same draws,
 * on every platform and build.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_below(std::uint64_t n) {
        // Lemire's multiply-shift with rejection; unbiased and deterministic.
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard exponential via inversion.
    double exponential() { return -std::log1p(-uniform01()); }

    /// Dirichlet(1,...,1): uniform point on the k-simplex.
    std::vector<double> simplex_point(int k) {
        std::vector<double> x(k);
        double s = 0;
        for (int i = 0; i < k; ++i) {
            x[i] = exponential();
            s += x[i];
        }
        for (int i = 0; i < k; ++i) x[i] /= s;
        return x;
    }

    /// Derive an independent stream; distinct tags yield distinct streams.
    Rng split(std::uint64_t tag) {
        // splitmix64 on (fresh draw, tag) so child streams do not overlap.
        std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ULL * (tag + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ccsa
