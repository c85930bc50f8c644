#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cepclust/errors.hpp"
#include "cepclust/rng.hpp"

namespace cepclust {

/// A finite, uniformly sampled real signal. At least two samples, all finite.
class TimeSeries {
public:
    TimeSeries() = default;

    explicit TimeSeries(std::vector<double> values, double sample_period = 1.0)
        : values_(std::move(values)), sample_period_(sample_period) {
        if (values_.size() < 2) {
            throw InvalidLengthError("time series needs at least 2 samples, got " +
                                     std::to_string(values_.size()));
        }
        if (!(sample_period_ > 0.0) || !std::isfinite(sample_period_)) {
            throw ValidationError("sample period must be positive and finite");
        }
        for (std::size_t k = 0; k < values_.size(); ++k) {
            if (!std::isfinite(values_[k])) {
                throw ValidationError("non-finite sample at index " + std::to_string(k));
            }
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    double sample_period() const noexcept { return sample_period_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    TimeSeries scaled(double factor) const {
        std::vector<double> v(values_);
        for (double& x : v) x *= factor;
        return TimeSeries(std::move(v), sample_period_);
    }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<double> values_;
    double sample_period_ = 1.0;
};

/// Input and output of one system run. Both series have the same length.
struct IOPair {
    IOPair() = default;
    IOPair(TimeSeries in, TimeSeries out, std::size_t id)
        : input(std::move(in)), output(std::move(out)), pair_id(id) {
        if (input.size() != output.size()) {
            throw IncompatibleLengthError("pair " + std::to_string(id) + ": input length " +
                                          std::to_string(input.size()) + " != output length " +
                                          std::to_string(output.size()));
        }
    }

    TimeSeries input;
    TimeSeries output;
    std::size_t pair_id = 0;
};

// ---------------------------------------------------------------------------
// Generators

/// i.i.d. N(0, std^2) samples.
inline TimeSeries gen_white_noise(std::size_t n, double std_dev, std::uint64_t seed) {
    if (n < 2) throw InvalidLengthError("white noise length must be >= 2, got " + std::to_string(n));
    if (!(std_dev > 0.0)) throw ParameterError("white noise std must be > 0");
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = std_dev * rng.gaussian();
    return TimeSeries(std::move(v));
}

struct SineComponent {
    double frequency;  // cycles per sample, strictly inside (0, 0.5)
    double amplitude;
    double phase;  // radians
};

/// Sum of sinusoids plus Gaussian noise. With noise_std > 0 the noise is exactly
/// gen_white_noise(n, noise_std, seed).
inline TimeSeries gen_multisine(std::size_t n, std::span<const SineComponent> components,
                                double noise_std, std::uint64_t seed) {
    if (n < 2) throw InvalidLengthError("multisine length must be >= 2, got " + std::to_string(n));
    if (noise_std < 0.0 || !std::isfinite(noise_std)) {
        throw ParameterError("multisine noise std must be >= 0");
    }
    for (const auto& c : components) {
        if (!(c.frequency > 0.0 && c.frequency < 0.5)) {
            throw AliasingError("multisine frequency " + std::to_string(c.frequency) +
                                " is outside (0, 0.5) cycles/sample");
        }
    }
    std::vector<double> v(n, 0.0);
    if (noise_std > 0.0) {
        const auto noise = gen_white_noise(n, noise_std, seed);
        std::copy(noise.values().begin(), noise.values().end(), v.begin());
    }
    for (const auto& c : components) {
        const double w = 2.0 * std::numbers::pi * c.frequency;
        for (std::size_t k = 0; k < n; ++k) {
            v[k] += c.amplitude * std::sin(w * static_cast<double>(k) + c.phase);
        }
    }
    return TimeSeries(std::move(v));
}

/// Default random multisine: 3-8 components, frequency in (0.01, 0.45),
/// amplitude in (0.5, 1.5), uniform phase; noise std 0.1.
inline std::vector<SineComponent> random_multisine_components(std::uint64_t seed) {
    Rng rng(seed);
    const int count = rng.uniform_int(3, 8);
    std::vector<SineComponent> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        SineComponent c{};
        c.frequency = rng.uniform(0.01, 0.45);
        c.amplitude = rng.uniform(0.5, 1.5);
        c.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        out.push_back(c);
    }
    return out;
}

inline constexpr double kDefaultMultisineNoiseStd = 0.1;

inline TimeSeries gen_random_multisine(std::size_t n, std::uint64_t seed) {
    const auto comps = random_multisine_components(derive_seed(seed, 1));
    return gen_multisine(n, comps, kDefaultMultisineNoiseStd, derive_seed(seed, 2));
}

/// One real or complex-conjugate pole/zero section,
/// (1 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct FilterSection {
    double b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;

    static FilterSection conjugate_pair(std::complex<double> pole, std::complex<double> zero) {
        return {-2.0 * zero.real(), std::norm(zero), -2.0 * pole.real(), std::norm(pole)};
    }
    static FilterSection real_root(double pole, double zero) { return {-zero, 0.0, -pole, 0.0}; }
    static FilterSection real_pole(double pole) { return {0.0, 0.0, -pole, 0.0}; }
};

/// Monic cascade filter used to colour white noise into an LTI-generated input.
struct InputFilter {
    std::vector<FilterSection> sections;

    std::size_t order() const noexcept {
        std::size_t n = 0;
        for (const auto& s : sections) n += (s.a2 != 0.0 || s.b2 != 0.0) ? 2 : 1;
        return n;
    }

    /// Direct form II transposed, zero initial state, section by section.
    std::vector<double> apply(std::span<const double> x) const {
        std::vector<double> y(x.begin(), x.end());
        for (const auto& s : sections) {
            double z1 = 0.0, z2 = 0.0;
            for (double& v : y) {
                const double in = v;
                const double out = in + z1;
                z1 = s.b1 * in - s.a1 * out + z2;
                z2 = s.b2 * in - s.a2 * out;
                v = out;
            }
        }
        return y;
    }
};

inline constexpr double kInputPoleRadius = 0.95;

/// Random stable filter of the given order: poles and zeros uniform (by area)
/// in the disk of radius 0.95, conjugate pairs plus one real root when odd.
inline InputFilter random_input_filter(int order, std::uint64_t seed) {
    if (order < 1) throw ParameterError("input filter order must be >= 1");
    Rng rng(seed);
    auto draw_in_disk = [&rng]() {
        const double r = kInputPoleRadius * std::sqrt(rng.uniform());
        const double theta = rng.uniform(0.0, std::numbers::pi);
        return std::polar(r, theta);
    };
    InputFilter f;
    if (order % 2 == 1) {
        const double p = rng.uniform(-kInputPoleRadius, kInputPoleRadius);
        const double z = rng.uniform(-kInputPoleRadius, kInputPoleRadius);
        f.sections.push_back(FilterSection::real_root(p, z));
    }
    for (int i = 0; i < order / 2; ++i) {
        const auto p = draw_in_disk();
        const auto z = draw_in_disk();
        f.sections.push_back(FilterSection::conjugate_pair(p, z));
    }
    return f;
}

/// Unit white noise passed through `filter`.
inline TimeSeries gen_filtered_noise(std::size_t n, const InputFilter& filter, std::uint64_t seed) {
    const auto noise = gen_white_noise(n, 1.0, seed);
    return TimeSeries(filter.apply(noise.values()));
}

/// Output of a random stable LTI system of `order` driven by unit white noise.
inline TimeSeries gen_lti_filtered_input(std::size_t n, int order, std::uint64_t seed) {
    if (order < 1) throw ParameterError("LTI input order must be >= 1, got " + std::to_string(order));
    const auto filter = random_input_filter(order, derive_seed(seed, 1));
    return gen_filtered_noise(n, filter, derive_seed(seed, 2));
}

}  // namespace cepclust
