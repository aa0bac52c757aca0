#pragma once

// Fixed-step propagation of i dpsi/dt = H(t) psi for a non-Hermitian
// generator H(t) = K(t) - i*Gamma*diag(w), K Hermitian, w >= 0.
//
// Two fourth-order schemes share one time grid:
//   Magnus4       two-point Gauss Magnus step with an exact exponential
//                 (exactly unitary for Gamma = 0, exact for diagonal H)
//   RungeKutta4   the classical explicit scheme
// The grid is split at the generator's breakpoints so no step straddles a
// discontinuity; every segment is divided into equal steps no longer than
// the requested one, so the final sample lands exactly on tf.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "scrap/error.hpp"

namespace scrap {

using cplx = std::complex<double>;

template <int N>
using CMatrix = Eigen::Matrix<cplx, N, N>;

template <int N>
using State = Eigen::Matrix<cplx, N, 1>;

template <int N>
State<N> basis_state(int k) {
    if (k < 0 || k >= N) throw DomainError("basis_state: index out of range");
    State<N> s = State<N>::Zero();
    s(k) = 1.0;
    return s;
}

template <int N>
std::vector<double> state_populations(const State<N>& psi) {
    std::vector<double> p(N);
    for (int i = 0; i < N; ++i) p[i] = std::norm(psi(i));
    return p;
}

/// H(t)/hbar in rad/s, split into its Hermitian part and a diagonal decay
/// pattern scaled by one rate Gamma.
template <int N>
class Generator {
public:
    using Matrix = CMatrix<N>;
    using HermitianFn = std::function<Matrix(double)>;

    Generator(HermitianFn hermitian, std::array<double, N> decay_weights, double gamma,
              std::vector<double> breakpoints = {})
        : hermitian_(std::move(hermitian)),
          weights_(decay_weights),
          gamma_(gamma),
          breakpoints_(std::move(breakpoints)) {
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
            throw DomainError("generator: decay rate must be finite and >= 0");
        }
        for (double w : weights_) {
            if (!(w >= 0.0)) throw DomainError("generator: decay weights must be >= 0");
        }
    }

    Matrix operator()(double t) const {
        Matrix h = hermitian_(t);
        if (gamma_ != 0.0) {
            for (int i = 0; i < N; ++i) h(i, i) -= cplx(0.0, gamma_ * weights_[i]);
        }
        return h;
    }

    Matrix hermitian_part(double t) const { return hermitian_(t); }

    double gamma() const { return gamma_; }
    const std::array<double, N>& decay_weights() const { return weights_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    Generator with_gamma(double gamma) const { return Generator(hermitian_, weights_, gamma, breakpoints_); }

private:
    HermitianFn hermitian_;
    std::array<double, N> weights_;
    double gamma_;
    std::vector<double> breakpoints_;
};

/// The same generator with the decay switched off.
template <int N>
Generator<N> hermitian_reference(const Generator<N>& h) {
    return h.with_gamma(0.0);
}

struct Trajectory {
    int dimension = 0;
    std::vector<double> times;
    std::vector<std::vector<cplx>> amplitudes;
    std::vector<std::vector<double>> populations;
    std::vector<double> norm;
    // Two-level runs only; filled by annotate_adiabatic.
    std::vector<double> theta;
    std::vector<double> eta;

    std::size_t size() const { return times.size(); }
};

/// |C_i|^2 at one recorded sample.
inline const std::vector<double>& populations(const Trajectory& traj, std::size_t index) {
    if (index >= traj.populations.size()) {
        throw DomainError("populations: sample index " + std::to_string(index) + " out of range (" +
                          std::to_string(traj.populations.size()) + " samples)");
    }
    return traj.populations[index];
}

enum class Scheme { Magnus4, RungeKutta4 };

inline const char* to_string(Scheme s) { return s == Scheme::Magnus4 ? "magnus4" : "rk4"; }

inline constexpr int kDefaultSteps = 200000;
inline constexpr int kDefaultRecordEvery = 20;  // 10000 recorded intervals at the default step

struct PropagationOptions {
    double step = 0.0;  // seconds; <= 0 selects (tf - t0) / kDefaultSteps
    int record_every = kDefaultRecordEvery;
    Scheme scheme = Scheme::Magnus4;
};

namespace detail {

inline void check_finite(const auto& m, double t) {
    if (!m.allFinite()) {
        throw NumericalError("generator produced a non-finite entry at t = " + std::to_string(t));
    }
}

/// exp(M) for a 2x2 complex matrix via the traceless split
/// exp(aI + B) = e^a (cosh(s) I + sinh(s)/s B), s^2 = -det B.
inline Eigen::Matrix2cd expm2(const cplx m00, const cplx m01, const cplx m10, const cplx m11) {
    const cplx a = 0.5 * (m00 + m11);
    const cplx b = 0.5 * (m00 - m11);
    const cplx q = b * b + m01 * m10;
    cplx c;
    cplx sh;
    if (std::abs(q) < 1e-10) {
        c = 1.0 + q / 2.0 + q * q / 24.0;
        sh = 1.0 + q / 6.0 + q * q / 120.0;
    } else {
        const cplx s = std::sqrt(q);
        c = std::cosh(s);
        sh = std::sinh(s) / s;
    }
    const cplx ea = std::exp(a);
    Eigen::Matrix2cd e;
    e(0, 0) = ea * (c + sh * b);
    e(0, 1) = ea * (sh * m01);
    e(1, 0) = ea * (sh * m10);
    e(1, 1) = ea * (c - sh * b);
    return e;
}

/// psi <- exp(M) psi, exploiting the block structure of M: the exponential is
/// taken separately on each connected component of M's sparsity graph, so
/// decoupled levels evolve by an exact scalar phase/decay.
template <int N>
void apply_expm(const CMatrix<N>& m, State<N>& psi) {
    std::array<int, N> comp;
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&comp](int i) {
        while (comp[i] != i) i = comp[i] = comp[comp[i]];
        return i;
    };
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            if (m(i, j) != cplx(0.0) || m(j, i) != cplx(0.0)) comp[find(i)] = find(j);
        }
    }
    std::array<bool, N> done{};
    for (int root = 0; root < N; ++root) {
        if (done[root]) continue;
        std::array<int, N> idx{};
        int n = 0;
        const int r = find(root);
        for (int i = 0; i < N; ++i) {
            if (find(i) == r) {
                idx[n++] = i;
                done[i] = true;
            }
        }
        if (n == 1) {
            psi(idx[0]) *= std::exp(m(idx[0], idx[0]));
        } else if (n == 2) {
            const int i = idx[0];
            const int j = idx[1];
            const Eigen::Matrix2cd e = expm2(m(i, i), m(i, j), m(j, i), m(j, j));
            const cplx pi = psi(i);
            const cplx pj = psi(j);
            psi(i) = e(0, 0) * pi + e(0, 1) * pj;
            psi(j) = e(1, 0) * pi + e(1, 1) * pj;
        } else {
            Eigen::MatrixXcd sub(n, n);
            Eigen::VectorXcd v(n);
            for (int a = 0; a < n; ++a) {
                v(a) = psi(idx[a]);
                for (int b = 0; b < n; ++b) sub(a, b) = m(idx[a], idx[b]);
            }
            const Eigen::MatrixXcd e = sub.exp();
            const Eigen::VectorXcd out = e * v;
            for (int a = 0; a < n; ++a) psi(idx[a]) = out(a);
        }
    }
}

template <int N>
void magnus4_step(const Generator<N>& h, double t, double dt, State<N>& psi) {
    static const double c = std::sqrt(3.0) / 6.0;
    const CMatrix<N> h1 = h(t + (0.5 - c) * dt);
    const CMatrix<N> h2 = h(t + (0.5 + c) * dt);
    check_finite(h1, t);
    check_finite(h2, t);
    // A_k = -i H_k;  Omega = dt/2 (A1 + A2) + sqrt(3)/12 dt^2 [A2, A1]
    //                      = -i dt/2 (H1 + H2) - sqrt(3)/12 dt^2 [H2, H1]
    const CMatrix<N> comm = h2 * h1 - h1 * h2;
    const CMatrix<N> omega = cplx(0.0, -0.5 * dt) * (h1 + h2) - (std::sqrt(3.0) / 12.0 * dt * dt) * comm;
    apply_expm<N>(omega, psi);
}

template <int N>
void rk4_step(const Generator<N>& h, double t, double dt, State<N>& psi) {
    const cplx mi(0.0, -1.0);
    const CMatrix<N> h0 = h(t);
    const CMatrix<N> hm = h(t + 0.5 * dt);
    const CMatrix<N> h1 = h(t + dt);
    check_finite(h0, t);
    check_finite(hm, t);
    check_finite(h1, t);
    const State<N> k1 = mi * (h0 * psi);
    const State<N> k2 = mi * (hm * (psi + 0.5 * dt * k1));
    const State<N> k3 = mi * (hm * (psi + 0.5 * dt * k2));
    const State<N> k4 = mi * (h1 * (psi + dt * k3));
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <int N>
void record(Trajectory& traj, double t, const State<N>& psi) {
    traj.times.push_back(t);
    std::vector<cplx> amp(N);
    std::vector<double> pop(N);
    double total = 0.0;
    for (int i = 0; i < N; ++i) {
        amp[i] = psi(i);
        pop[i] = std::norm(psi(i));
        total += pop[i];
    }
    traj.amplitudes.push_back(std::move(amp));
    traj.populations.push_back(std::move(pop));
    traj.norm.push_back(std::sqrt(total));
}

}  // namespace detail

/// Segment boundaries [t0, b..., tf] with the breakpoints strictly inside.
inline std::vector<double> segment_bounds(double t0, double tf, const std::vector<double>& breakpoints) {
    std::vector<double> bounds{t0};
    for (double b : breakpoints) {
        if (b > t0 && b < tf && b > bounds.back()) bounds.push_back(b);
    }
    bounds.push_back(tf);
    return bounds;
}

/// Number of equal steps used for a segment of length `len` with nominal step `step`.
inline long steps_for(double len, double step) {
    const double ratio = len / step;
    long n = static_cast<long>(std::ceil(ratio * (1.0 - 1e-12)));
    return n < 1 ? 1 : n;
}

template <int N>
Trajectory propagate(const Generator<N>& h, const State<N>& psi0, double t0, double tf,
                     PropagationOptions opts = {}) {
    if (!(std::isfinite(t0) && std::isfinite(tf) && t0 < tf)) {
        throw DomainError("propagate: requires finite t0 < tf");
    }
    double step = opts.step;
    if (step <= 0.0) step = (tf - t0) / kDefaultSteps;
    if (!std::isfinite(step) || step > (tf - t0)) {
        throw DomainError("propagate: step must be finite and no longer than tf - t0");
    }
    if (opts.record_every < 1) throw DomainError("propagate: record_every must be >= 1");
    if (!psi0.allFinite() || std::abs(psi0.norm() - 1.0) > 1e-12) {
        throw DomainError("propagate: initial state must be unit-norm");
    }

    const auto bounds = segment_bounds(t0, tf, h.breakpoints());
    long total_steps = 0;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) total_steps += steps_for(bounds[s + 1] - bounds[s], step);

    Trajectory traj;
    traj.dimension = N;
    const std::size_t expected = static_cast<std::size_t>(total_steps / opts.record_every + 2);
    traj.times.reserve(expected);
    traj.amplitudes.reserve(expected);
    traj.populations.reserve(expected);
    traj.norm.reserve(expected);

    State<N> psi = psi0;
    detail::record<N>(traj, t0, psi);
    long global = 0;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        const double a = bounds[s];
        const double b = bounds[s + 1];
        const long n = steps_for(b - a, step);
        const double dt = (b - a) / static_cast<double>(n);
        for (long k = 0; k < n; ++k) {
            const double t = a + static_cast<double>(k) * dt;
            const double t_next = (k + 1 == n) ? b : a + static_cast<double>(k + 1) * dt;
            const double this_dt = t_next - t;
            if (opts.scheme == Scheme::Magnus4) {
                detail::magnus4_step<N>(h, t, this_dt, psi);
            } else {
                detail::rk4_step<N>(h, t, this_dt, psi);
            }
            ++global;
            if (!psi.allFinite()) {
                throw NumericalError("propagate: state became non-finite at t = " + std::to_string(t_next));
            }
            if (global % opts.record_every == 0 || global == total_steps) {
                detail::record<N>(traj, t_next, psi);
            }
        }
    }
    return traj;
}

}  // namespace scrap
