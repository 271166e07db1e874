#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace majoloop {

// Splittable counter-style generator built on SplitMix64. Streams are keyed
// by hashing an arbitrary tuple of 64-bit words (master seed, pool id, round,
// draw index, ...), so any worker can reconstruct its stream independent of
// scheduling.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    // Derive an independent stream from a key tuple.
    static Rng keyed(std::initializer_list<uint64_t> key) {
        uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (uint64_t k : key) {
            h = mix(h ^ mix(k));
        }
        return Rng(h);
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, n). Rejection-free Lemire reduction.
    uint64_t next_below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_gaussian() {
        // Marsaglia polar method, one value per call (spare discarded).
        while (true) {
            double u = 2.0 * next_double() - 1.0;
            double v = 2.0 * next_double() - 1.0;
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

  private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

// Sample an index from unnormalized weights by inverse CDF. Intended for
// small tables (colors, resolutions); O(k) per draw.
inline std::size_t sample_discrete(Rng& rng, const std::vector<double>& weights,
                                   double total) {
    double u = rng.next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
}

}  // namespace majoloop
