#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cepclust/errors.hpp"
#include "cepclust/signal.hpp"
#include "cepclust/spectral.hpp"

namespace cepclust {

// ---------------------------------------------------------------------------
// Raw-data distances

inline double d_euclidean(const TimeSeries& y1, const TimeSeries& y2) {
    if (y1.size() != y2.size()) {
        throw IncompatibleLengthError("euclidean distance needs equal lengths, got " + std::to_string(y1.size()) +
                                      " and " + std::to_string(y2.size()));
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < y1.size(); ++k) {
        const double d = y1[k] - y2[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

/// Sakoe-Chiba band shared by the exact DTW and its Keogh lower bound.
struct DtwConfig {
    /// Band radius as a fraction of the longer series; 1.0 is unconstrained.
    double band_radius_fraction = 0.1;

    void validate() const {
        if (!(band_radius_fraction > 0.0 && band_radius_fraction <= 1.0)) {
            throw ConfigError("DTW band fraction must be in (0, 1], got " + std::to_string(band_radius_fraction));
        }
    }

    /// Radius in samples, at least 1.
    std::size_t radius(std::size_t n1, std::size_t n2) const {
        validate();
        const auto n = static_cast<double>(std::max(n1, n2));
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(band_radius_fraction * n)));
    }
};

/// Minimum over monotone, continuous warping paths (|i - j| <= radius) of
/// sqrt(sum of squared mismatches).
inline double d_dtw_exact(const TimeSeries& y1, const TimeSeries& y2, const DtwConfig& cfg = {}) {
    const std::size_t n = y1.size(), m = y2.size();
    const std::size_t r = cfg.radius(n, m);
    const std::size_t gap = n > m ? n - m : m - n;
    if (r < gap) {
        throw InfeasibleBandError("DTW band radius " + std::to_string(r) + " cannot bridge length difference " +
                                  std::to_string(gap));
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m, inf), cur(m, inf);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > r ? i - r : 0;
        const std::size_t hi = std::min(m - 1, i + r);
        std::fill(cur.begin(), cur.end(), inf);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double d = y1[i] - y2[j];
            const double cost = d * d;
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                best = inf;
                if (i > 0) best = std::min(best, prev[j]);
                if (j > 0) best = std::min(best, cur[j - 1]);
                if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
            }
            cur[j] = cost + best;
        }
        std::swap(prev, cur);
    }
    return std::sqrt(prev[m - 1]);
}

namespace detail {

/// Running max/min of `x` over windows [i - r, i + r] (Lemire's deque method).
inline void envelope(std::span<const double> x, std::size_t r, std::vector<double>& upper,
                     std::vector<double>& lower) {
    const std::size_t n = x.size();
    upper.assign(n, 0.0);
    lower.assign(n, 0.0);
    std::deque<std::size_t> maxq, minq;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hi = std::min(n - 1, i + r);
        for (; next <= hi; ++next) {
            while (!maxq.empty() && x[maxq.back()] <= x[next]) maxq.pop_back();
            maxq.push_back(next);
            while (!minq.empty() && x[minq.back()] >= x[next]) minq.pop_back();
            minq.push_back(next);
        }
        const std::size_t lo = i > r ? i - r : 0;
        while (maxq.front() < lo) maxq.pop_front();
        while (minq.front() < lo) minq.pop_front();
        upper[i] = x[maxq.front()];
        lower[i] = x[minq.front()];
    }
}

}  // namespace detail

/// Keogh bound of `query` against the band envelope of `candidate`.
inline double lb_keogh_one_sided(const TimeSeries& query, const TimeSeries& candidate, const DtwConfig& cfg = {}) {
    if (query.size() != candidate.size()) {
        throw IncompatibleLengthError("Keogh lower bound needs equal lengths, got " + std::to_string(query.size()) +
                                      " and " + std::to_string(candidate.size()));
    }
    const std::size_t r = cfg.radius(query.size(), candidate.size());
    std::vector<double> upper, lower;
    detail::envelope(candidate.values(), r, upper, lower);
    double sum = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) {
        const double q = query[i];
        if (q > upper[i]) {
            sum += (q - upper[i]) * (q - upper[i]);
        } else if (q < lower[i]) {
            sum += (lower[i] - q) * (lower[i] - q);
        }
    }
    return std::sqrt(sum);
}

/// Symmetric Keogh bound: the smaller of the two one-sided bounds, so a
/// low-amplitude series inside the other's envelope scores zero either way.
/// Still a lower bound on d_dtw_exact under the same band.
inline double lb_keogh(const TimeSeries& y1, const TimeSeries& y2, const DtwConfig& cfg = {}) {
    return std::min(lb_keogh_one_sided(y1, y2, cfg), lb_keogh_one_sided(y2, y1, cfg));
}

// ---------------------------------------------------------------------------
// Cepstral distances
//
// Weighted sums run over the causal half of the (even) cepstrum, k < L/2.
// Shorter coefficient sequences are zero-padded to the longer one.

/// sum_k k * (a(k) - b(k))^2 over k < max(La, Lb)/2.
inline double weighted_cepstral_sum(std::span<const double> a, std::span<const double> b) {
    const std::size_t limit = std::max(a.size(), b.size()) / 2;
    double sum = 0.0;
    for (std::size_t k = 1; k < limit; ++k) {
        const double ak = k < a.size() ? a[k] : 0.0;
        const double bk = k < b.size() ? b[k] : 0.0;
        const double d = ak - bk;
        sum += static_cast<double>(k) * d * d;
    }
    return sum;
}

inline double cepstral_norm(const Cepstrum& c) {
    return weighted_cepstral_sum(c.coefficients, std::span<const double>{});
}

inline double cepstral_norm(const TimeSeries& y, const WelchConfig& cfg) { return cepstral_norm(power_cepstrum(y, cfg)); }

inline double cepstral_distance(const Cepstrum& c1, const Cepstrum& c2) {
    return weighted_cepstral_sum(c1.coefficients, c2.coefficients);
}

inline double cepstral_distance(const TimeSeries& y1, const TimeSeries& y2, const WelchConfig& cfg) {
    return cepstral_distance(power_cepstrum(y1, cfg), power_cepstrum(y2, cfg));
}

/// System contribution c_h = c_y - c_u of one input/output pair.
struct SystemCepstrum {
    std::vector<double> coefficients;
};

inline SystemCepstrum system_cepstrum(const Cepstrum& output, const Cepstrum& input) {
    if (output.size() != input.size()) {
        throw IncompatibleLengthError("input and output cepstra differ in length");
    }
    SystemCepstrum h;
    h.coefficients.resize(output.size());
    for (std::size_t k = 0; k < output.size(); ++k) h.coefficients[k] = output[k] - input[k];
    return h;
}

/// Both series are first passed through the whitening filter of the input
/// (cfg.prewhiten_order, reduced so that a full Welch segment remains). A
/// filter applied to u and y alike cancels in c_y - c_u, but it flattens the
/// input spectrum, whose dynamic range can otherwise exceed what the window
/// sidelobes resolve.
inline SystemCepstrum system_cepstrum(const IOPair& pair, const WelchConfig& cfg) {
    const std::size_t n = pair.input.size();
    const std::size_t p = n > cfg.segment_length ? std::min(cfg.prewhiten_order, n - cfg.segment_length) : 0;
    if (p == 0) return system_cepstrum(power_cepstrum(pair.output, cfg), power_cepstrum(pair.input, cfg));
    const auto a = burg_ar(pair.input.values(), p);
    return system_cepstrum(power_cepstrum(fir_filter(pair.output, a), cfg), power_cepstrum(fir_filter(pair.input, a), cfg));
}

inline double extended_cepstral_distance(const SystemCepstrum& h1, const SystemCepstrum& h2) {
    return weighted_cepstral_sum(h1.coefficients, h2.coefficients);
}

inline double extended_cepstral_distance(const IOPair& p1, const IOPair& p2, const WelchConfig& cfg) {
    return extended_cepstral_distance(system_cepstrum(p1, cfg), system_cepstrum(p2, cfg));
}

}  // namespace cepclust
