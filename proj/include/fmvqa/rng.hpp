#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fmvqa {

// Mixes a 64-bit value through the splitmix64 finalizer. Used to derive
// independent child seeds so that one campaign seed determines every stream.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix_seed(master ^ mix_seed(stream + 1));
}

// mt19937_64 with hand-rolled variate transforms. The standard distribution
// classes are implementation-defined, which would make frozen test values
// toolchain-dependent; these transforms are bit-stable everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_of_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, bound)
    std::uint64_t integer(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    double normal(double mean = 0.0, double sd = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return mean + sd * u * m;
    }

    Rng child(std::uint64_t stream) const { return Rng(derive_seed(seed_of_, stream)); }

    std::uint64_t seed() const { return seed_of_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_of_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fmvqa
