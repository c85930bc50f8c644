#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cepclust/fft.hpp"
#include "cepclust/signal.hpp"
#include "cepclust/spectral.hpp"
#include "oracles.hpp"

using namespace cepclust;

namespace {

std::vector<Complex> random_complex(std::size_t n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    std::vector<Complex> x(n);
    for (auto& v : x) v = Complex(g(gen), g(gen));
    return x;
}

TimeSeries ar1_series(std::size_t n, double a, unsigned seed) { return TimeSeries(oracle::ar1(n, a, seed)); }

WelchConfig segment(std::size_t len) {
    WelchConfig c;
    c.segment_length = len;
    return c;
}

}  // namespace

TEST(Fft, ImpulseIsFlat) {
    const std::vector<Complex> x{1, 0, 0, 0};
    for (const auto& v : fft(x)) EXPECT_NEAR(std::abs(v - Complex(1, 0)), 0.0, 1e-15);
}

TEST(Fft, ConstantIsDcOnly) {
    const double c = 2.5;
    const std::vector<Complex> x(4, c);
    const auto f = fft(x);
    EXPECT_NEAR(std::abs(f[0] - Complex(4 * c, 0)), 0.0, 1e-15);
    for (int k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(f[k]), 0.0, 1e-15);
}

TEST(Fft, RoundTrip) {
    const auto x = random_complex(1024, 1);
    const auto y = ifft(fft(x));
    for (std::size_t i = 0; i < x.size(); ++i) ASSERT_LE(std::abs(x[i] - y[i]), 1e-12);
}

TEST(Fft, MatchesNaiveDft) {
    for (std::size_t n : {2u, 8u, 64u, 256u}) {
        const auto x = random_complex(n, static_cast<unsigned>(n));
        const auto a = fft(x);
        const auto b = oracle::naive_dft(x);
        for (std::size_t k = 0; k < n; ++k) ASSERT_LE(std::abs(a[k] - b[k]), 1e-10 * static_cast<double>(n)) << n;
        const auto ai = fft(x, true);
        const auto bi = oracle::naive_dft(x, true);
        for (std::size_t k = 0; k < n; ++k) ASSERT_LE(std::abs(ai[k] - bi[k]), 1e-12 * static_cast<double>(n)) << n;
    }
}

TEST(Fft, LengthHandling) {
    const std::vector<Complex> x(6, 1.0);
    EXPECT_THROW(fft(x), InvalidLengthError);
    const auto padded = fft(x, false, true);
    ASSERT_EQ(padded.size(), 8u);
    EXPECT_NEAR(padded[0].real(), 6.0, 1e-12);
    EXPECT_THROW(FftPlan(0), InvalidLengthError);
    EXPECT_THROW(FftPlan(12), InvalidLengthError);
}

TEST(WelchConfig, Validation) {
    EXPECT_THROW(segment(100).validate(), ConfigError);
    WelchConfig c;
    c.overlap_fraction = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c.overlap_fraction = -0.1;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(segment(256).validate_for(255), ConfigError);
    EXPECT_NO_THROW(segment(256).validate_for(256));
    EXPECT_EQ(segment(256).hop(), 128u);
}

TEST(WelchConfig, DefaultSegmentLength) {
    EXPECT_EQ(default_segment_length(64), 16u);
    EXPECT_EQ(default_segment_length(256), 64u);
    EXPECT_EQ(default_segment_length(1000), 128u);
    EXPECT_EQ(default_segment_length(1024), 256u);
    EXPECT_EQ(default_segment_length(1 << 16), 256u);
    EXPECT_EQ(default_segment_length(4), 2u);
}

TEST(WelchPsd, MatchesNaiveWelch) {
    const auto x = gen_white_noise(1024, 1.0, 17);
    const auto psd = welch_psd(x, segment(64));
    const auto ref = oracle::naive_welch_hann({x.values().begin(), x.values().end()}, 64);
    ASSERT_EQ(psd.values.size(), ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(psd.values[k], ref[k], 1e-10 * (1.0 + ref[k]));
}

TEST(WelchPsd, WhiteNoiseIsFlat) {
    const auto x = gen_white_noise(1 << 14, 1.0, 3);
    const auto psd = welch_psd(x, segment(256));
    double mean = 0.0;
    for (double v : psd.values) {
        EXPECT_GE(v, 0.5);
        EXPECT_LE(v, 1.5);
        mean += v;
    }
    mean /= static_cast<double>(psd.values.size());
    EXPECT_GE(mean, 0.9);
    EXPECT_LE(mean, 1.1);
}

TEST(WelchPsd, SinusoidPeak) {
    const std::vector<SineComponent> c{{0.125, 1.0, 0.3}};
    const auto x = gen_multisine(1 << 12, c, 0.0, 0);
    const auto psd = welch_psd(x, segment(256));
    const auto peak = std::max_element(psd.values.begin(), psd.values.begin() + 129) - psd.values.begin();
    EXPECT_EQ(peak, 32);
    const auto mirror = std::max_element(psd.values.begin() + 129, psd.values.end()) - psd.values.begin();
    EXPECT_EQ(mirror, 224);
}

TEST(WelchPsd, ParsevalOnWhiteNoise) {
    const auto x = gen_white_noise(1 << 14, 2.0, 8);
    const auto psd = welch_psd(x, segment(256));
    double mean = 0.0, var = 0.0;
    for (double v : psd.values) mean += v;
    mean /= static_cast<double>(psd.values.size());
    for (double v : x.values()) var += v * v;
    var /= static_cast<double>(x.size());
    EXPECT_NEAR(mean, var, 0.05 * var);
}

TEST(WelchPsd, ConjugateSymmetricAndNonnegative) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto x = gen_lti_filtered_input(2048, 15, seed);
        const auto psd = welch_psd(x, segment(128));
        const std::size_t L = psd.values.size();
        for (std::size_t k = 0; k < L; ++k) {
            ASSERT_GE(psd.values[k], 0.0);
            ASSERT_TRUE(std::isfinite(psd.values[k]));
            if (k > 0) ASSERT_NEAR(psd.values[k], psd.values[L - k], 1e-9 * psd.values[k]);
        }
    }
}

TEST(WelchPsd, ShiftInvariantForStationaryInput) {
    const auto x = gen_white_noise(1 << 16, 1.0, 5);
    std::vector<double> rotated(x.values().begin(), x.values().end());
    std::rotate(rotated.begin(), rotated.begin() + 100, rotated.end());
    const auto a = welch_psd(x, segment(256));
    const auto b = welch_psd(TimeSeries(rotated), segment(256));
    for (std::size_t k = 0; k < a.values.size(); ++k) ASSERT_NEAR(a.values[k], b.values[k], 0.1 * a.values[k]);
}

TEST(WelchPsd, ShortSeriesIsConfigError) {
    EXPECT_THROW(welch_psd(gen_white_noise(100, 1.0, 1), segment(128)), ConfigError);
}

TEST(WelchPsd, SegmentEqualToLengthIsPlainPeriodogram) {
    const auto x = gen_white_noise(64, 1.0, 2);
    WelchConfig c = segment(64);
    c.window = Window::rectangular;
    const auto psd = welch_psd(x, c);
    std::vector<Complex> xc(x.values().begin(), x.values().end());
    const auto f = oracle::naive_dft(xc);
    for (std::size_t k = 0; k < 64; ++k) EXPECT_NEAR(psd.values[k], std::norm(f[k]) / 64.0, 1e-10);
}

TEST(Windows, ShapesAndNames) {
    const auto h = make_window(Window::hann, 8);
    EXPECT_DOUBLE_EQ(h[0], 0.0);
    EXPECT_NEAR(h[4], 1.0, 1e-15);
    const auto m = make_window(Window::hamming, 8);
    EXPECT_NEAR(m[0], 0.08, 1e-15);
    for (double v : make_window(Window::rectangular, 8)) EXPECT_EQ(v, 1.0);
    for (auto w : {Window::hann, Window::hamming, Window::rectangular}) EXPECT_EQ(parse_window(to_string(w)), w);
    EXPECT_THROW(parse_window("kaiser"), ConfigError);
}

TEST(Cepstrum, WhiteNoiseOnlyZerothCoefficient) {
    const auto c = power_cepstrum(gen_white_noise(1 << 16, 1.0, 1), segment(256));
    for (std::size_t k = 1; k < c.size(); ++k) ASSERT_LE(std::abs(c[k]), 0.05) << k;
}

TEST(Cepstrum, Ar1ClosedForm) {
    const double a = 0.5;
    const auto c = power_cepstrum(ar1_series(1 << 16, a, 42), segment(256));
    EXPECT_NEAR(c[1], oracle::ar1_cepstrum(a, 1), 0.1 * oracle::ar1_cepstrum(a, 1));
    // estimator spread is about 0.005 per coefficient at this length
    for (int k = 1; k <= 8; ++k) EXPECT_NEAR(c[static_cast<std::size_t>(k)], oracle::ar1_cepstrum(a, k), 0.02) << k;
}

TEST(Cepstrum, ScalingMovesOnlyC0) {
    const auto y = gen_lti_filtered_input(4096, 15, 6);
    for (double alpha : {2.0, 0.1, 37.0}) {
        const auto c1 = power_cepstrum(y, segment(256));
        const auto c2 = power_cepstrum(y.scaled(alpha), segment(256));
        EXPECT_NEAR(c2[0] - c1[0], 2.0 * std::log(alpha), 1e-9);
        for (std::size_t k = 1; k < c1.size(); ++k) ASSERT_NEAR(c1[k], c2[k], 1e-9) << k;
    }
}

TEST(Cepstrum, EvenSequence) {
    const auto c = power_cepstrum(gen_lti_filtered_input(2048, 15, 2), segment(128));
    const std::size_t L = c.size();
    ASSERT_EQ(L, 128u);
    for (std::size_t k = 1; k < L; ++k) ASSERT_NEAR(c[k], c[L - k], 1e-9);
}

TEST(Cepstrum, FloorKeepsSpectralNullsFinite) {
    // a pure tone has near-zero power away from its peak
    const std::vector<SineComponent> comp{{0.25, 1.0, 0.0}};
    const auto x = gen_multisine(1024, comp, 0.0, 0);
    WelchConfig cfg = segment(64);
    cfg.window = Window::rectangular;
    const auto c = power_cepstrum(x, cfg);
    for (double v : c.coefficients) ASSERT_TRUE(std::isfinite(v));
}

TEST(Cepstrum, ZeroSignalIsNumericError) {
    EXPECT_THROW(power_cepstrum(TimeSeries(std::vector<double>(64, 0.0)), segment(16)), NumericError);
}

TEST(Burg, Ar2Coefficients) {
    std::mt19937_64 gen(12);
    std::normal_distribution<double> g;
    std::vector<double> y(1 << 14);
    for (std::size_t k = 0; k < y.size(); ++k) {
        y[k] = g(gen) + (k >= 1 ? 0.9 * y[k - 1] : 0.0) - (k >= 2 ? 0.5 * y[k - 2] : 0.0);
    }
    const auto a = burg_ar(y, 2);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a[0], 1.0);
    EXPECT_NEAR(a[1], -0.9, 0.03);
    EXPECT_NEAR(a[2], 0.5, 0.03);
}

TEST(Burg, WhiteNoiseNearIdentity) {
    const auto a = burg_ar(gen_white_noise(1 << 14, 3.0, 4).values(), 4);
    for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LE(std::abs(a[i]), 0.05) << i;
}

TEST(Burg, FilterIsMinimumPhase) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = burg_ar(gen_lti_filtered_input(1024, 15, seed).values(), 8);
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(8, 8);
        for (int i = 0; i < 8; ++i) companion(0, i) = -a[static_cast<std::size_t>(i) + 1];
        for (int i = 1; i < 8; ++i) companion(i, i - 1) = 1.0;
        ASSERT_LT(companion.eigenvalues().cwiseAbs().maxCoeff(), 1.0) << seed;
    }
}

TEST(Burg, DegenerateInputs) {
    EXPECT_EQ(burg_ar(std::vector<double>(64, 0.0), 4), std::vector<double>{1.0});
    EXPECT_EQ(burg_ar(std::vector<double>{1.0, 2.0}, 0), std::vector<double>{1.0});
    EXPECT_THROW(burg_ar(std::vector<double>{1.0, 2.0}, 2), InvalidLengthError);
}

TEST(Fir, DropsWarmUpSamples) {
    const TimeSeries x({1.0, 2.0, 4.0, 7.0}, 0.5);
    const std::vector<double> diff{1.0, -1.0};
    const auto y = fir_filter(x, diff);
    EXPECT_EQ(y, TimeSeries({1.0, 2.0, 3.0}, 0.5));
    EXPECT_THROW(fir_filter(x, std::vector<double>(4, 1.0)), InvalidLengthError);
}
