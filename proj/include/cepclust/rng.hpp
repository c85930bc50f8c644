#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cepclust {

// Portable randomness.
//
// std::mt19937_64 is bit-specified by the standard, but the std:: distributions
// are not, so uniform and Gaussian variates are derived here by hand:
// 53-bit uniform doubles and the basic Box-Muller transform (both outputs used).
// Equal seeds give bitwise-equal streams on every conforming platform.

/// SplitMix64 finalizer. Used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Child seed for stream `stream` of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    /// Uniform in [0, 1).
    double uniform() noexcept {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (lo, hi); the open lower end avoids log(0) in Box-Muller.
    double uniform(double lo, double hi) noexcept {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return lo + (hi - lo) * u;
    }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(static_cast<std::uint64_t>(uniform() * static_cast<double>(span)));
    }

    /// Standard normal variate.
    double gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(0.0, 1.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cepclust
