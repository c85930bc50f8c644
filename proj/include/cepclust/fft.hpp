#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "cepclust/errors.hpp"

namespace cepclust {

using Complex = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

/// Largest power of two <= n (0 for n == 0).
constexpr std::size_t floor_power_of_two(std::size_t n) noexcept { return n == 0 ? 0 : std::bit_floor(n); }

/// Iterative radix-2 transform for one fixed length. Twiddles are computed
/// directly (no recurrence) so round trips stay at machine precision.
/// A plan is immutable after construction and can be shared read-only.
class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n) {
        if (n == 0 || !is_power_of_two(n)) {
            throw InvalidLengthError("FFT length must be a power of two, got " + std::to_string(n));
        }
        twiddles_.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            twiddles_[k] = Complex(std::cos(angle), std::sin(angle));
        }
        reversed_.resize(n);
        const int bits = std::countr_zero(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
            reversed_[i] = r;
        }
    }

    std::size_t size() const noexcept { return n_; }

    /// In-place transform. The inverse is scaled by 1/n.
    void transform(std::span<Complex> data, bool inverse) const {
        if (data.size() != n_) {
            throw InvalidLengthError("FFT plan of length " + std::to_string(n_) + " applied to " +
                                     std::to_string(data.size()) + " values");
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (i < reversed_[i]) std::swap(data[i], data[reversed_[i]]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t stride = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    Complex w = twiddles_[k * stride];
                    if (inverse) w = std::conj(w);
                    const Complex t = w * data[start + k + half];
                    data[start + k + half] = data[start + k] - t;
                    data[start + k] += t;
                }
            }
        }
        if (inverse) {
            const double scale = 1.0 / static_cast<double>(n_);
            for (auto& v : data) v *= scale;
        }
    }

private:
    std::size_t n_;
    std::vector<Complex> twiddles_;
    std::vector<std::size_t> reversed_;
};

/// DFT of `values` (inverse: normalized by 1/L). Non-power-of-two lengths are
/// rejected unless `pad` is set, in which case the input is zero-padded to the
/// next power of two.
inline std::vector<Complex> fft(std::span<const Complex> values, bool inverse = false, bool pad = false) {
    std::size_t n = values.size();
    if (!is_power_of_two(n)) {
        if (!pad || n == 0) {
            throw InvalidLengthError("FFT length must be a power of two, got " + std::to_string(n));
        }
        n = std::bit_ceil(n);
    }
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    std::copy(values.begin(), values.end(), out.begin());
    FftPlan(n).transform(out, inverse);
    return out;
}

inline std::vector<Complex> ifft(std::span<const Complex> values) { return fft(values, true); }

}  // namespace cepclust
