#pragma once

// Independent reference computations. Nothing here calls into the library
// code it is used to check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

/// O(L^2) DFT; inverse is scaled by 1/L.
inline std::vector<cd> naive_dft(const std::vector<cd>& x, bool inverse = false) {
    const std::size_t n = x.size();
    std::vector<cd> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cd s = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            s += x[t] * cd(std::cos(ang), std::sin(ang));
        }
        out[k] = inverse ? s / static_cast<double>(n) : s;
    }
    return out;
}

/// Welch average with a naive DFT and a Hann window, scaled by the window
/// energy so unit white noise averages 1.
inline std::vector<double> naive_welch_hann(const std::vector<double>& x, std::size_t len) {
    std::vector<double> w(len);
    double energy = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(len));
        energy += w[i] * w[i];
    }
    std::vector<double> acc(len, 0.0);
    std::size_t segs = 0;
    for (std::size_t s = 0; s + len <= x.size(); s += len / 2) {
        std::vector<cd> seg(len);
        for (std::size_t i = 0; i < len; ++i) seg[i] = x[s + i] * w[i];
        const auto f = naive_dft(seg);
        for (std::size_t k = 0; k < len; ++k) acc[k] += std::norm(f[k]);
        ++segs;
    }
    for (double& v : acc) v /= energy * static_cast<double>(segs);
    return acc;
}

/// y(k) = a y(k-1) + e(k), e ~ N(0, 1).
inline std::vector<double> ar1(std::size_t n, double a, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> y(n);
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        prev = a * prev + g(gen);
        y[k] = prev;
    }
    return y;
}

/// Power cepstrum of 1 / (1 - a z^-1): c(k) = a^k / k for k >= 1.
inline double ar1_cepstrum(double a, int k) { return std::pow(a, k) / k; }

/// sum_k k (a^k/k)^2 = -log(1 - a^2).
inline double ar1_cepstral_norm(double a) { return -std::log(1.0 - a * a); }

/// sum_k k (a^k/k - b^k/k)^2 in closed form.
inline double ar1_pair_distance(double a, double b) {
    return std::log((1.0 - a * b) * (1.0 - a * b) / ((1.0 - a * a) * (1.0 - b * b)));
}

/// Voltage across L2 per unit source current, from the two node equations:
///   I = V1 (1/(s L1) + s C + 1/R) - V2 / R
///   0 = -V1 / R + V2 (1/R + 1/(s L2))
inline cd circuit_kcl(double R, double L1, double L2, double C, cd s) {
    const cd a11 = 1.0 / (s * L1) + s * C + 1.0 / R;
    const cd a12 = -1.0 / R;
    const cd a22 = 1.0 / R + 1.0 / (s * L2);
    const cd det = a11 * a22 - a12 * a12;
    return -a12 / det;  // V2 for I = 1
}

/// sqrt(D^2 + sum_{k=1}^{terms} (C A^{k-1} B)^2)
inline double h2_impulse_sum(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, const Eigen::RowVectorXd& C,
                             double D, std::size_t terms = 10000) {
    double sum = D * D;
    Eigen::VectorXd x = B;
    for (std::size_t k = 0; k < terms; ++k) {
        const double h = (C * x)(0);
        sum += h * h;
        x = A * x;
    }
    return std::sqrt(sum);
}

/// ARI from raw pair counts: a = together in both, b/c = together in one
/// only, d = apart in both.
inline double ari_pair_counting(const std::vector<int>& p, const std::vector<int>& q) {
    double a = 0, b = 0, c = 0, d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            const bool sp = p[i] == p[j], sq = q[i] == q[j];
            if (sp && sq) a += 1;
            else if (sp) b += 1;
            else if (sq) c += 1;
            else d += 1;
        }
    }
    const double den = (a + b) * (b + d) + (a + c) * (c + d);
    return den == 0.0 ? 1.0 : 2.0 * (a * d - b * c) / den;
}

inline double lag1_autocorrelation(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        den += (x[k] - mean) * (x[k] - mean);
        if (k > 0) num += (x[k] - mean) * (x[k - 1] - mean);
    }
    return num / den;
}

/// Random stable discrete SISO system of the given order (spectral radius
/// below 0.9), via a scaled random A.
inline void random_stable(std::mt19937_64& gen, int n, Eigen::MatrixXd& A, Eigen::VectorXd& B,
                          Eigen::RowVectorXd& C, double& D) {
    std::normal_distribution<double> g(0.0, 1.0);
    A.resize(n, n);
    B.resize(n);
    C.resize(n);
    for (int i = 0; i < n; ++i) {
        B(i) = g(gen);
        C(i) = g(gen);
        for (int j = 0; j < n; ++j) A(i, j) = g(gen);
    }
    const double rho = A.eigenvalues().cwiseAbs().maxCoeff();
    std::uniform_real_distribution<double> u(0.3, 0.9);
    A *= u(gen) / rho;
    D = g(gen);
}

}  // namespace oracle
