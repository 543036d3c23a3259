#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace slfv {

// Counter-mode mixer (splitmix64). Injective for fixed master seed, so
// replicate streams are pairwise distinct and independent of scheduling.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t replicate_seed(uint64_t master_seed, uint64_t replicate_index) {
    return splitmix64(splitmix64(master_seed) ^ (replicate_index * 0x9e3779b97f4a7c15ULL));
}

// Engine wrapper with hand-rolled transforms: std::*_distribution algorithms are
// implementation-defined, and byte-identical replay must depend on config alone.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t raw() { return eng_(); }

    // uniform on [0,1), 53-bit resolution
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log1p(-u01()) / rate; }

    // uniform integer in [0, n); multiply-shift, bias < n/2^64
    uint32_t uniform_below(uint32_t n) {
        return static_cast<uint32_t>((static_cast<unsigned __int128>(eng_()) * n) >> 64);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace slfv
