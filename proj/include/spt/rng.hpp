#pragma once

#include <cstdint>
#include <random>

namespace spt {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Per-task seed from the master seed and a task counter.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ull));
}

class Rng {
public:
    using result_type = uint64_t;
    explicit Rng(uint64_t seed) : eng_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return eng_(); }

    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    // Uniform integer in [0, n); n > 0. Lemire's multiply-shift with rejection.
    uint64_t below(uint64_t n) {
        unsigned __int128 m = (unsigned __int128)eng_() * n;
        uint64_t lo = uint64_t(m);
        if (lo < n) {
            uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = (unsigned __int128)eng_() * n;
                lo = uint64_t(m);
            }
        }
        return uint64_t(m >> 64);
    }
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 eng_;
};

}  // namespace spt
