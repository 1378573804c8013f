#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace convdrift {

// Seed mixing and bounded draws are written out here instead of using the
// std distributions, whose outputs differ between standard library
// implementations. Generated corpora must be identical everywhere for a
// given seed.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw from [0, n). n must be > 0.
    std::size_t bounded(std::size_t n) {
        // Modulo bias is < 2^-53 for the sizes used here.
        return static_cast<std::size_t>(engine_() % n);
    }

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    double normal() {
        // Marsaglia polar method, deterministic across platforms.
        if (spare_valid_) {
            spare_valid_ = false;
            return spare_;
        }
        while (true) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                const double f = std::sqrt(-2.0 * std::log(s) / s);
                spare_ = v * f;
                spare_valid_ = true;
                return u * f;
            }
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            std::swap(xs[i - 1], xs[bounded(i)]);
        }
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool spare_valid_ = false;
};

}  // namespace convdrift
