#pragma once

#include <cstdint>

namespace dlo {

// splitmix64; used for seed derivation so trial/sampler streams are decorrelated.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stable derivation of sub-seeds: stable_hash(master, 0) != master, order-sensitive.
inline uint64_t stable_hash(uint64_t master_seed, uint64_t index) {
    uint64_t s = master_seed ^ (0x9E3779B97F4A7C15ull * (index + 1));
    return splitmix64(s);
}

// xoshiro256++ with Box-Muller normals. Self-contained so that trained runs are
// reproducible independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed = 0x853C49E6748FEA9Bull) { reseed(seed); }

    void reseed(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        has_cached_normal_ = false;
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    uint64_t uniform_index(uint64_t n) { return next_u64() % n; }

    double normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        has_cached_normal_ = true;
        return r * std::cos(a);
    }

private:
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    uint64_t s_[4] = {};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace dlo
