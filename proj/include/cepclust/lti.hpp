#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cepclust/errors.hpp"
#include "cepclust/signal.hpp"

namespace cepclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

namespace detail {

inline void check_dimensions(const Matrix& A, const Vector& B, const RowVector& C) {
    if (A.rows() != A.cols() || B.size() != A.rows() || C.size() != A.rows()) {
        throw ValidationError("state-space dimensions inconsistent: A " + std::to_string(A.rows()) + "x" +
                              std::to_string(A.cols()) + ", B " + std::to_string(B.size()) + ", C " +
                              std::to_string(C.size()));
    }
    if (!A.allFinite() || !B.allFinite() || !C.allFinite()) {
        throw ValidationError("state-space matrices contain non-finite values");
    }
}

}  // namespace detail

/// SISO continuous-time model dx/dt = A x + B u, y = C x + D u.
struct ContinuousStateSpace {
    Matrix A;
    Vector B;
    RowVector C;
    double D = 0.0;

    ContinuousStateSpace() = default;
    ContinuousStateSpace(Matrix a, Vector b, RowVector c, double d)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(d) {
        detail::check_dimensions(A, B, C);
    }

    Eigen::Index order() const noexcept { return A.rows(); }

    /// C (sI - A)^-1 B + D
    std::complex<double> frequency_response(std::complex<double> s) const {
        if (order() == 0) return D;
        using CMatrix = Eigen::MatrixXcd;
        const Eigen::Index n = order();
        CMatrix m = s * CMatrix::Identity(n, n) - A.cast<std::complex<double>>();
        const Eigen::VectorXcd x = m.partialPivLu().solve(B.cast<std::complex<double>>());
        return (C.cast<std::complex<double>>() * x)(0) + D;
    }
};

/// SISO discrete-time model x(k+1) = A x(k) + B u(k), y(k) = C x(k) + D u(k).
struct StateSpace {
    Matrix A;
    Vector B;
    RowVector C;
    double D = 0.0;
    double sample_period = 1.0;

    StateSpace() = default;
    StateSpace(Matrix a, Vector b, RowVector c, double d, double dt)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(d), sample_period(dt) {
        detail::check_dimensions(A, B, C);
        if (!(sample_period > 0.0)) throw ValidationError("sample period must be > 0");
    }

    static StateSpace static_gain(double gain, double dt = 1.0) {
        return StateSpace(Matrix(0, 0), Vector(0), RowVector(0), gain, dt);
    }

    Eigen::Index order() const noexcept { return A.rows(); }

    Eigen::VectorXcd poles() const {
        if (order() == 0) return Eigen::VectorXcd(0);
        return A.eigenvalues();
    }

    double spectral_radius() const {
        const auto p = poles();
        return p.size() == 0 ? 0.0 : p.cwiseAbs().maxCoeff();
    }

    bool is_stable() const { return spectral_radius() < 1.0; }

    /// H(z) = C (zI - A)^-1 B + D
    std::complex<double> transfer(std::complex<double> z) const {
        if (order() == 0) return D;
        const Eigen::Index n = order();
        Eigen::MatrixXcd m = z * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
        const Eigen::VectorXcd x = m.partialPivLu().solve(B.cast<std::complex<double>>());
        return (C.cast<std::complex<double>>() * x)(0) + D;
    }
};

// ---------------------------------------------------------------------------
// Reference circuit: current source into node 1; L1 and C from node 1 to
// ground; R from node 1 to node 2; L2 from node 2 to ground. Output is the
// voltage across L2.

struct CircuitComponents {
    double R = 0.0;   // ohm
    double L1 = 0.0;  // henry
    double L2 = 0.0;  // henry
    double C = 0.0;   // farad

    void validate() const {
        if (!(R > 0.0 && L1 > 0.0 && L2 > 0.0 && C > 0.0) ||
            !std::isfinite(R + L1 + L2 + C)) {
            throw ValidationError("circuit components must all be strictly positive and finite");
        }
    }
};

inline constexpr CircuitComponents kCircuitS1{100.0, 60.0, 20.0, 50.0};
inline constexpr CircuitComponents kCircuitS2{100.0, 160.0, 200.0, 75.0};

/// Physical realization with states (capacitor voltage, L1 current, L2 current):
///   C dv/dt   = i_u - i1 - i2
///   L1 di1/dt = v
///   L2 di2/dt = v - R i2
///   e_y       = v - R i2
/// giving H(s) = s^2 L2 / (s^3 C L2 + s^2 R C + s (1 + L2/L1) + R/L1).
inline ContinuousStateSpace circuit_model(const CircuitComponents& c) {
    c.validate();
    Matrix A(3, 3);
    A << 0.0, -1.0 / c.C, -1.0 / c.C,
         1.0 / c.L1, 0.0, 0.0,
         1.0 / c.L2, 0.0, -c.R / c.L2;
    Vector B(3);
    B << 1.0 / c.C, 0.0, 0.0;
    RowVector C(3);
    C << 1.0, 0.0, -c.R;
    return ContinuousStateSpace(std::move(A), std::move(B), std::move(C), 0.0);
}

/// Closed-form transfer function of the circuit, used as a cross-check.
inline std::complex<double> circuit_transfer(const CircuitComponents& c, std::complex<double> s) {
    const auto num = s * s * c.L2;
    const auto den = s * s * s * c.C * c.L2 + s * s * c.R * c.C + s * (1.0 + c.L2 / c.L1) + c.R / c.L1;
    return num / den;
}

// ---------------------------------------------------------------------------
// Discretization

enum class Discretization { bilinear, zoh };

inline std::string_view to_string(Discretization d) {
    return d == Discretization::bilinear ? "bilinear" : "zoh";
}

inline Discretization parse_discretization(std::string_view name) {
    if (name == "bilinear" || name == "tustin") return Discretization::bilinear;
    if (name == "zoh") return Discretization::zoh;
    throw ConfigError("unknown discretization '" + std::string(name) + "'");
}

/// Circuit experiments sample the slow resonances of S1 and S2 at roughly
/// 0.23 and 0.12 cycles per sample, well inside the Welch bins.
inline constexpr double kDefaultCircuitSamplePeriod = 80.0;
inline constexpr Discretization kDefaultCircuitDiscretization = Discretization::zoh;

/// Bilinear (Tustin) transform, or zero-order hold on request.
inline StateSpace discretize(const ContinuousStateSpace& css, double dt,
                             Discretization method = Discretization::bilinear) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("sample period must be > 0");
    const Eigen::Index n = css.order();
    if (n == 0) return StateSpace::static_gain(css.D, dt);

    if (method == Discretization::zoh) {
        Matrix aug = Matrix::Zero(n + 1, n + 1);
        aug.topLeftCorner(n, n) = css.A * dt;
        aug.topRightCorner(n, 1) = css.B * dt;
        const Matrix e = aug.exp();
        return StateSpace(e.topLeftCorner(n, n), e.topRightCorner(n, 1), css.C, css.D, dt);
    }

    const double singular_at = 2.0 / dt;
    const Eigen::VectorXcd eig = css.A.eigenvalues();
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        if (std::abs(eig(i) - singular_at) <= 1e-9 * (1.0 + singular_at)) {
            throw DiscretizationError("A has an eigenvalue at 2/dt = " + std::to_string(singular_at) +
                                      "; bilinear transform is singular");
        }
    }
    const Matrix I = Matrix::Identity(n, n);
    const Matrix ima = I - 0.5 * dt * css.A;
    const auto lu = ima.partialPivLu();
    Matrix ad = lu.solve(I + 0.5 * dt * css.A);
    Vector bd = lu.solve(dt * css.B);
    RowVector cd = ima.transpose().partialPivLu().solve(css.C.transpose()).transpose();
    const double dd = css.D + 0.5 * (css.C * bd)(0);
    return StateSpace(std::move(ad), std::move(bd), std::move(cd), dd, dt);
}

inline StateSpace discrete_circuit(const CircuitComponents& c, double dt = kDefaultCircuitSamplePeriod,
                                   Discretization method = kDefaultCircuitDiscretization) {
    return discretize(circuit_model(c), dt, method);
}

// ---------------------------------------------------------------------------
// Simulation

inline constexpr double kDivergenceLimit = 1e12;

/// Zero initial state. Throws DivergenceError on unstable models or when any
/// output exceeds 1e12 in magnitude.
inline TimeSeries simulate(const StateSpace& ss, const TimeSeries& u) {
    if (!ss.is_stable()) {
        throw DivergenceError("cannot simulate unstable system (spectral radius " +
                              std::to_string(ss.spectral_radius()) + ")");
    }
    const auto n = static_cast<std::size_t>(ss.order());
    // row-major copies for a tight allocation-free loop
    std::vector<double> a(n * n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = ss.B(static_cast<Eigen::Index>(i));
        c[i] = ss.C(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = ss.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    std::vector<double> x(n, 0.0), next(n);
    std::vector<double> y(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double uk = u[k];
        double yk = ss.D * uk;
        for (std::size_t i = 0; i < n; ++i) yk += c[i] * x[i];
        if (!(std::abs(yk) <= kDivergenceLimit)) {
            throw DivergenceError("simulation diverged at sample " + std::to_string(k));
        }
        y[k] = yk;
        for (std::size_t i = 0; i < n; ++i) {
            double s = b[i] * uk;
            for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
            next[i] = s;
        }
        x.swap(next);
    }
    return TimeSeries(std::move(y), u.sample_period());
}

// ---------------------------------------------------------------------------
// Norms

namespace detail {

inline void require_stable_for_norm(const StateSpace& ss, const char* which) {
    const double rho = ss.spectral_radius();
    if (!(rho < 1.0)) {
        throw UnboundedNormError(std::string(which) + " norm is unbounded: spectral radius " + std::to_string(rho));
    }
}

/// Solves W = A^T W A + Q for stable A.
inline Matrix discrete_lyapunov(const Matrix& A, const Matrix& Q) {
    const Eigen::Index n = A.rows();
    if (n <= 24) {
        const Eigen::Index nn = n * n;
        // vec(A^T W A) = (A^T kron A^T) vec(W)
        Matrix K = Matrix::Identity(nn, nn);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                K.block(i * n, j * n, n, n) -= A(j, i) * A.transpose();
            }
        }
        const Vector w = K.partialPivLu().solve(Q.reshaped());
        Matrix W = w.reshaped(n, n);
        return 0.5 * (W + W.transpose());
    }
    // Smith doubling: W = sum_k (A^T)^k Q A^k
    Matrix W = Q;
    Matrix Ak = A;
    for (int it = 0; it < 200; ++it) {
        const Matrix step = Ak.transpose() * W * Ak;
        W += step;
        Ak = Ak * Ak;
        if (step.norm() <= 1e-16 * W.norm()) break;
    }
    return 0.5 * (W + W.transpose());
}

}  // namespace detail

/// sqrt(D^2 + B^T Wo B) with Wo the observability Gramian.
inline double h2_norm(const StateSpace& ss) {
    detail::require_stable_for_norm(ss, "H2");
    if (ss.order() == 0) return std::abs(ss.D);
    const Matrix Q = ss.C.transpose() * ss.C;
    const Matrix W = detail::discrete_lyapunov(ss.A, Q);
    const double value = ss.D * ss.D + (ss.B.transpose() * W * ss.B)(0);
    return std::sqrt(std::max(0.0, value));
}

inline constexpr std::size_t kDefaultHinfGrid = 4096;

namespace detail {

inline double gain_at(const StateSpace& ss, double omega) {
    return std::abs(ss.transfer(std::polar(1.0, omega)));
}

}  // namespace detail

/// Peak of |H(e^{jw})| on [0, pi): uniform grid, then golden-section search
/// around the best grid point.
inline double hinf_norm(const StateSpace& ss, std::size_t grid_size = kDefaultHinfGrid) {
    if (grid_size == 0) throw ParameterError("H-infinity grid size must be positive");
    const auto p = ss.poles();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (std::abs(std::abs(p(i)) - 1.0) <= 1e-9) {
            throw UnboundedNormError("H-infinity norm is unbounded: pole on the unit circle");
        }
    }
    if (ss.order() == 0) return std::abs(ss.D);

    const double step = std::numbers::pi / static_cast<double>(grid_size);
    double best = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double g = detail::gain_at(ss, step * static_cast<double>(i));
        if (g > best) {
            best = g;
            best_i = i;
        }
    }

    double lo = best_i == 0 ? 0.0 : step * static_cast<double>(best_i - 1);
    double hi = std::min(std::numbers::pi, step * static_cast<double>(best_i + 1));
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = detail::gain_at(ss, x1);
    double f2 = detail::gain_at(ss, x2);
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = detail::gain_at(ss, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = detail::gain_at(ss, x1);
        }
    }
    return std::max({best, f1, f2});
}

enum class ModelNorm { h2, hinf };

/// Parallel connection ss1 - ss2.
inline StateSpace difference_system(const StateSpace& ss1, const StateSpace& ss2) {
    if (std::abs(ss1.sample_period - ss2.sample_period) > 1e-12 * std::max(ss1.sample_period, ss2.sample_period)) {
        throw IncompatibleModelError("sample periods differ: " + std::to_string(ss1.sample_period) + " vs " +
                                     std::to_string(ss2.sample_period));
    }
    const Eigen::Index n1 = ss1.order(), n2 = ss2.order();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = ss1.A;
    A.bottomRightCorner(n2, n2) = ss2.A;
    Vector B(n1 + n2);
    B << ss1.B, ss2.B;
    RowVector C(n1 + n2);
    C << ss1.C, -ss2.C;
    return StateSpace(std::move(A), std::move(B), std::move(C), ss1.D - ss2.D, ss1.sample_period);
}

namespace detail {

/// Lexicographic order on (order, A, B, C, D); used to evaluate a model pair
/// in one fixed orientation.
inline bool model_less(const StateSpace& a, const StateSpace& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    auto lex = [](const auto& x, const auto& y) {
        return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
    };
    if (lex(a.A, b.A)) return true;
    if (lex(b.A, a.A)) return false;
    if (lex(a.B, b.B)) return true;
    if (lex(b.B, a.B)) return false;
    if (lex(a.C, b.C)) return true;
    if (lex(b.C, a.C)) return false;
    return a.D < b.D;
}

}  // namespace detail

/// Norm of ss1 - ss2. Exactly 0 for identical realizations and exactly
/// symmetric in its arguments.
inline double model_distance(const StateSpace& ss1, const StateSpace& ss2, ModelNorm norm,
                             std::size_t grid_size = kDefaultHinfGrid) {
    const bool swap = detail::model_less(ss2, ss1);
    const StateSpace& lo = swap ? ss2 : ss1;
    const StateSpace& hi = swap ? ss1 : ss2;
    if (!detail::model_less(lo, hi) && lo.sample_period == hi.sample_period) return 0.0;
    const auto diff = difference_system(lo, hi);
    return norm == ModelNorm::h2 ? h2_norm(diff) : hinf_norm(diff, grid_size);
}

}  // namespace cepclust
