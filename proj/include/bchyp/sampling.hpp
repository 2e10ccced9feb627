#ifndef BCHYP_SAMPLING_HPP
#define BCHYP_SAMPLING_HPP

#include <cstdint>

#include "bchyp/common.hpp"

namespace bch {

// Deterministic, platform-independent sampling.  splitmix64 for plain
// pseudo-random draws, a seed-offset Halton sequence for low-discrepancy box
// sweeps.  Reports are reproducible from (seed, box) alone.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform01() {
        return double(splitmix64(state_) >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniformInt(int lo, int hi) {   // inclusive
        return lo + int(splitmix64(state_) % std::uint64_t(hi - lo + 1));
    }
    std::uint64_t next() { return splitmix64(state_); }

  private:
    std::uint64_t state_;
};

inline double haltonPoint(std::uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * double(index % base);
        index /= base;
    }
    return r;
}

// Low-discrepancy sampler over an axis-aligned box.
class HaltonBox {
  public:
    HaltonBox(std::uint64_t seed, Vec lo, Vec hi)
        : lo_(std::move(lo)), hi_(std::move(hi)) {
        std::uint64_t s = seed;
        offset_ = 1 + (splitmix64(s) % 100000);
    }

    Vec sample(std::uint64_t i) const {
        static const int primes[8] = {2, 3, 5, 7, 11, 13, 17, 19};
        Vec out(lo_.size());
        for (std::size_t d = 0; d < lo_.size(); ++d) {
            const double u = haltonPoint(i + offset_, primes[d % 8]);
            out[d] = lo_[d] + (hi_[d] - lo_[d]) * u;
        }
        return out;
    }

  private:
    Vec lo_, hi_;
    std::uint64_t offset_;
};

} // namespace bch

#endif
