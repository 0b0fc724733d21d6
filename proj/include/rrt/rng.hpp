#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace rrt {

// Deterministic random stream (xoshiro256++ with splitmix64 seeding).
// Hand-rolled rather than <random> so that draws are identical across
// compilers and standard libraries; reproducibility of every experiment
// hinges on (seed, replicate index) alone.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : state_) w = splitmix(x);
    }

    // Stream for one replicate; any worker/thread assignment yields the same
    // stream for the same (master, replicate) pair.
    static Rng for_replicate(std::uint64_t master, std::uint64_t replicate) {
        std::uint64_t x = mix(master ^ 0x243f6a8885a308d3ULL);
        x ^= mix(replicate + 0x13198a2e03707344ULL);
        return Rng(mix(x));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased uniform draw from {0, ..., bound-1} (Lemire's method).
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = -bound % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool coin() { return (next_u64() >> 63) != 0; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via the polar method; one spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Poisson by multiplication for small means, split additively above that
    // (Poi(a+b) = Poi(a) + Poi(b) with independent summands).
    std::uint64_t poisson(double lambda) {
        std::uint64_t total = 0;
        while (lambda > 30.0) {
            total += poisson_small(30.0);
            lambda -= 30.0;
        }
        if (lambda > 0.0) total += poisson_small(lambda);
        return total;
    }

    // Uniform unordered pair 1 <= a < b <= m.
    std::pair<std::uint32_t, std::uint32_t> unordered_pair(std::uint32_t m) {
        auto a = static_cast<std::uint32_t>(below(m));
        auto b = static_cast<std::uint32_t>(below(m - 1));
        if (b >= a) ++b;
        if (a > b) std::swap(a, b);
        return {a + 1, b + 1};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        return mix(x);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t poisson_small(double lambda) {
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rrt
