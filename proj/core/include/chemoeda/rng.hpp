#pragma once

#include <cstdint>
#include <random>

namespace chemo {

// splitmix64; used to derive independent stream seeds from (base, index...).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(base ^ mix64(a + 0x632be59bd9b4e019ULL) ^ mix64(b + 0x9e6c63d0876a9a47ULL));
}

// mt19937_64 with hand-rolled draw helpers. std:: distributions are not
// bit-stable across standard libraries, so all sampling goes through these.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t u64() { return gen_(); }

    // uniform in [0, 1) with 53-bit resolution
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), n >= 1; rejection sampling, no modulo bias
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

    int index(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

    bool chance(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    int bit() { return static_cast<int>(gen_() >> 63); }

  private:
    std::mt19937_64 gen_;
};

}  // namespace chemo
