#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cepclust/errors.hpp"
#include "cepclust/fft.hpp"
#include "cepclust/signal.hpp"

namespace cepclust {

enum class Window { hann, hamming, rectangular };

inline std::string_view to_string(Window w) {
    switch (w) {
        case Window::hann: return "hann";
        case Window::hamming: return "hamming";
        case Window::rectangular: return "rectangular";
    }
    return "?";
}

inline Window parse_window(std::string_view name) {
    if (name == "hann") return Window::hann;
    if (name == "hamming") return Window::hamming;
    if (name == "rectangular") return Window::rectangular;
    throw ConfigError("unknown window '" + std::string(name) + "'");
}

/// Periodic window of length n.
inline std::vector<double> make_window(Window kind, std::size_t n) {
    std::vector<double> w(n, 1.0);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = std::cos(step * static_cast<double>(i));
        switch (kind) {
            case Window::hann: w[i] = 0.5 - 0.5 * c; break;
            case Window::hamming: w[i] = 0.54 - 0.46 * c; break;
            case Window::rectangular: break;
        }
    }
    return w;
}

struct WelchConfig {
    std::size_t segment_length = 256;
    double overlap_fraction = 0.5;
    Window window = Window::hann;
    /// Bins are floored at psd_floor_ratio * max(PSD) before the log.
    double psd_floor_ratio = 1e-12;
    /// Order of the AR whitening filter fitted on the input of a pair and
    /// applied to both of its series before the system cepstrum; 0 disables.
    std::size_t prewhiten_order = 4;

    std::size_t overlap_samples() const noexcept {
        return static_cast<std::size_t>(std::floor(overlap_fraction * static_cast<double>(segment_length)));
    }
    std::size_t hop() const noexcept { return segment_length - overlap_samples(); }

    void validate() const {
        if (segment_length < 2 || !is_power_of_two(segment_length)) {
            throw ConfigError("welch segment length must be a power of two >= 2, got " +
                              std::to_string(segment_length));
        }
        if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
            throw ConfigError("welch overlap fraction must be in [0, 1), got " + std::to_string(overlap_fraction));
        }
        if (!(psd_floor_ratio > 0.0 && psd_floor_ratio < 1.0)) {
            throw ConfigError("psd floor ratio must be in (0, 1)");
        }
    }

    void validate_for(std::size_t series_length) const {
        validate();
        if (series_length < segment_length) {
            throw ConfigError("series length " + std::to_string(series_length) +
                              " is shorter than welch segment length " + std::to_string(segment_length));
        }
    }

    friend bool operator==(const WelchConfig&, const WelchConfig&) = default;
};

/// min(256, largest power of two <= n/4), never below 2.
inline std::size_t default_segment_length(std::size_t n) {
    return std::max<std::size_t>(2, std::min<std::size_t>(256, floor_power_of_two(n / 4)));
}

inline WelchConfig default_welch_config(std::size_t n) {
    WelchConfig cfg;
    cfg.segment_length = default_segment_length(n);
    return cfg;
}

/// Two-sided PSD over segment_length bins.
struct PowerSpectrum {
    std::vector<double> values;
    std::size_t segment_length() const noexcept { return values.size(); }
};

/// Real power-cepstrum coefficients c(0..L-1); even: c(k) == c(L-k).
struct Cepstrum {
    std::vector<double> coefficients;
    std::size_t size() const noexcept { return coefficients.size(); }
    double operator[](std::size_t k) const noexcept { return coefficients[k]; }
};

/// Averaged windowed periodograms, scaled so unit-variance white noise has
/// PSD ~ 1 in every bin. No detrending is applied.
inline PowerSpectrum welch_psd(const TimeSeries& series, const WelchConfig& cfg) {
    cfg.validate_for(series.size());
    const std::size_t len = cfg.segment_length;
    const std::size_t hop = cfg.hop();
    const auto window = make_window(cfg.window, len);
    double window_energy = 0.0;
    for (double w : window) window_energy += w * w;

    const FftPlan plan(len);
    std::vector<Complex> buf(len);
    std::vector<double> acc(len / 2 + 1, 0.0);
    const auto x = series.values();
    std::size_t segments = 0;
    for (std::size_t start = 0; start + len <= x.size(); start += hop) {
        for (std::size_t i = 0; i < len; ++i) buf[i] = Complex(x[start + i] * window[i], 0.0);
        plan.transform(buf, false);
        for (std::size_t k = 0; k <= len / 2; ++k) acc[k] += std::norm(buf[k]);
        ++segments;
    }

    PowerSpectrum out;
    out.values.resize(len);
    const double scale = 1.0 / (window_energy * static_cast<double>(segments));
    for (std::size_t k = 0; k <= len / 2; ++k) out.values[k] = acc[k] * scale;
    // mirror so the two-sided spectrum is exactly conjugate-symmetric
    for (std::size_t k = len / 2 + 1; k < len; ++k) out.values[k] = out.values[len - k];
    return out;
}

/// Inverse DFT of the floored log-PSD.
inline Cepstrum cepstrum_from_psd(const PowerSpectrum& psd, double floor_ratio = 1e-12) {
    const std::size_t len = psd.values.size();
    const double peak = *std::max_element(psd.values.begin(), psd.values.end());
    if (!(peak > 0.0) || !std::isfinite(peak)) {
        throw NumericError("power spectrum is identically zero or non-finite");
    }
    const double floor = floor_ratio * peak;
    std::vector<Complex> buf(len);
    for (std::size_t k = 0; k < len; ++k) buf[k] = Complex(std::log(std::max(psd.values[k], floor)), 0.0);
    FftPlan(len).transform(buf, true);

    Cepstrum c;
    c.coefficients.resize(len);
    double residue = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        residue = std::max(residue, std::abs(buf[k].imag()));
        c.coefficients[k] = buf[k].real();
    }
    if (residue > 1e-9) {
        throw NumericError("cepstrum has imaginary residue " + std::to_string(residue));
    }
    return c;
}

inline Cepstrum power_cepstrum(const TimeSeries& series, const WelchConfig& cfg) {
    return cepstrum_from_psd(welch_psd(series, cfg), cfg.psd_floor_ratio);
}

/// Burg estimate of a(0..order), a(0) = 1, such that
/// x(k) + a(1) x(k-1) + ... + a(p) x(k-p) is close to white. Stops early on a
/// signal with no remaining power.
inline std::vector<double> burg_ar(std::span<const double> x, std::size_t order) {
    const std::size_t n = x.size();
    if (order >= n) {
        throw InvalidLengthError("AR order " + std::to_string(order) + " needs more than " + std::to_string(n) +
                                 " samples");
    }
    std::vector<double> f(x.begin(), x.end()), b(x.begin(), x.end()), a{1.0};
    for (std::size_t m = 0; m < order; ++m) {
        double num = 0.0, den = 0.0;
        for (std::size_t t = m + 1; t < n; ++t) {
            num += f[t] * b[t - 1];
            den += f[t] * f[t] + b[t - 1] * b[t - 1];
        }
        if (!(den > 0.0)) break;
        const double k = -2.0 * num / den;
        std::vector<double> next(a.size() + 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            next[i] += a[i];
            next[a.size() - i] += k * a[i];
        }
        a = std::move(next);
        for (std::size_t t = n - 1; t > m; --t) {
            const double ft = f[t];
            f[t] = ft + k * b[t - 1];
            b[t] = b[t - 1] + k * ft;
        }
    }
    return a;
}

/// FIR filter with taps a; the first a.size() - 1 outputs, which would need
/// samples before the start, are dropped.
inline TimeSeries fir_filter(const TimeSeries& x, std::span<const double> a) {
    const std::size_t p = a.size() - 1;
    if (a.empty() || p >= x.size()) throw InvalidLengthError("FIR filter longer than the series");
    std::vector<double> y(x.size() - p);
    for (std::size_t t = p; t < x.size(); ++t) {
        double acc = 0.0;
        for (std::size_t i = 0; i <= p; ++i) acc += a[i] * x[t - i];
        y[t - p] = acc;
    }
    return TimeSeries(std::move(y), x.sample_period());
}

}  // namespace cepclust
