#pragma once

#include <cstdint>
#include <random>

namespace bene {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-path generator. Substream (seed, stream_id) pairs are mixed through
// splitmix64 into an mt19937_64 seed, so paths are independent of worker
// partitioning. Gaussians via Box-Muller to keep the byte stream fully
// specified by this code.
class Rng {
  public:
    Rng(uint64_t seed, uint64_t stream_id) {
        uint64_t s = seed;
        uint64_t a = splitmix64(s);
        s ^= 0x6a09e667f3bcc909ULL + stream_id * 0x2545f4914f6cdd1dULL;
        uint64_t b = splitmix64(s);
        eng_.seed(a ^ (b << 1));
    }

    double uniform() {  // in (0, 1)
        // 53-bit mantissa; shift by +0.5 ulp to stay off 0.
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform(), v = uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        double th = 6.283185307179586 * v;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

// FNV-1a over bytes, used for config hashing.
inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace bene
