#pragma once

// Adiabatic-frame quantities of the lossless two-level generator
//   H/hbar = 1/2 [[0, Omega], [Omega, 2 Delta]]
// with adiabatic states |+> = sin(theta)|0> + cos(theta)|1>,
//                      |-> = cos(theta)|0> - sin(theta)|1>,
// tan(2 theta) = Omega / Delta, and the decay estimates obtained by letting
// the population ride one adiabatic path.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "scrap/dynamics.hpp"
#include "scrap/error.hpp"
#include "scrap/pulses.hpp"

namespace scrap {

struct AdiabaticFrame {
    double theta = 0.0;      // rad, in [0, pi/2]
    double eps_plus = 0.0;   // rad/s
    double eps_minus = 0.0;  // rad/s
};

/// theta = atan2(|Omega|, Delta) / 2. The sign of Omega is a gauge choice.
/// Returns 0 at the degenerate point Omega = Delta = 0.
inline double mixing_angle(double omega, double delta) {
    if (omega == 0.0 && delta == 0.0) return 0.0;
    return 0.5 * std::atan2(std::abs(omega), delta);
}

/// (eps_plus, eps_minus) = Delta +/- sqrt(Delta^2 + Omega^2)
inline std::pair<double, double> adiabatic_energies(double omega, double delta) {
    const double root = std::hypot(delta, omega);
    return {delta + root, delta - root};
}

inline AdiabaticFrame adiabatic_frame(double omega, double delta) {
    const auto [ep, em] = adiabatic_energies(omega, delta);
    return {mixing_angle(omega, delta), ep, em};
}

/// Adiabaticity parameter |Omega dDelta/dt - Delta dOmega/dt| / (2 (Delta^2 + Omega^2)^(3/2)).
/// Infinite where the gap closes.
inline double adiabaticity_eta(double omega, double omega_dot, double delta, double delta_dot) {
    const double r2 = delta * delta + omega * omega;
    if (r2 == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(omega * delta_dot - delta * omega_dot) / (2.0 * r2 * std::sqrt(r2));
}

/// Amplitudes on (|+>, |->).
inline std::pair<cplx, cplx> to_adiabatic_frame(const State<2>& psi, double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return {s * psi(0) + c * psi(1), c * psi(0) - s * psi(1)};
}

inline std::pair<cplx, cplx> to_adiabatic_frame(const std::vector<cplx>& amplitudes, double theta) {
    if (amplitudes.size() != 2) throw DomainError("to_adiabatic_frame: state must be two-dimensional");
    State<2> psi;
    psi << amplitudes[0], amplitudes[1];
    return to_adiabatic_frame(psi, theta);
}

inline double eta_at(const ScrapSchedule& schedule, double t) {
    return adiabaticity_eta(pulse_eval(schedule.rabi(), t), pulse_derivative(schedule.rabi(), t),
                            pulse_eval(schedule.detuning(), t), pulse_derivative(schedule.detuning(), t));
}

/// Largest eta on a uniform grid of `samples` points over the schedule span.
inline double eta_profile_max(const ScrapSchedule& schedule, int samples) {
    if (samples < 2) throw DomainError("eta_profile_max: need at least 2 samples");
    const double t0 = schedule.t_start();
    const double dt = (schedule.t_end() - t0) / static_cast<double>(samples - 1);
    double best = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double t = (k + 1 == samples) ? schedule.t_end() : t0 + k * dt;
        const double e = eta_at(schedule, t);
        if (std::isinf(e)) return e;
        if (e > best) best = e;
    }
    return best;
}

/// Fills traj.theta and traj.eta from the schedule. theta holds the previous
/// sample's value across a degenerate point.
inline void annotate_adiabatic(Trajectory& traj, const ScrapSchedule& schedule) {
    if (traj.dimension != 2) throw DomainError("annotate_adiabatic: two-level trajectories only");
    traj.theta.resize(traj.size());
    traj.eta.resize(traj.size());
    double last_theta = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        const double om = pulse_eval(schedule.rabi(), t);
        const double de = pulse_eval(schedule.detuning(), t);
        if (!(om == 0.0 && de == 0.0)) last_theta = mixing_angle(om, de);
        traj.theta[k] = last_theta;
        traj.eta[k] = eta_at(schedule, t);
    }
}

/// Composite Simpson over equally spaced samples. An odd number of intervals
/// closes with one trapezoid on the final interval.
inline double simpson(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    const std::size_t intervals = n - 1;
    const std::size_t even = intervals - (intervals % 2);
    double acc = 0.0;
    for (std::size_t i = 0; i + 2 <= even; i += 2) acc += f[i] + 4.0 * f[i + 1] + f[i + 2];
    acc *= dx / 3.0;
    if (even != intervals) acc += 0.5 * dx * (f[n - 2] + f[n - 1]);
    return acc;
}

enum class TransferTarget { FromGround, FromExcited };

/// Time the system spends "in" the decaying level along the adiabatic path:
/// integral of sin^2(theta) (ground start, path |->) or cos^2(theta)
/// (excited start, path |+>) over the schedule span, on the propagation grid.
inline double decay_exposure(const ScrapSchedule& schedule, TransferTarget target, double step = 0.0) {
    const double t0 = schedule.t_start();
    const double tf = schedule.t_end();
    if (step <= 0.0) step = (tf - t0) / kDefaultSteps;
    const auto bounds = segment_bounds(t0, tf, schedule.breakpoints());
    double total = 0.0;
    double last_theta = 0.0;
    std::vector<double> f;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        const double a = bounds[s];
        const double b = bounds[s + 1];
        const long n = steps_for(b - a, step);
        const double dx = (b - a) / static_cast<double>(n);
        f.assign(static_cast<std::size_t>(n + 1), 0.0);
        for (long k = 0; k <= n; ++k) {
            double t = a + static_cast<double>(k) * dx;
            // One-sided limits at the segment ends keep window edges out of the integrand.
            if (k == 0) t = std::nextafter(a, b);
            if (k == n) t = std::nextafter(b, a);
            const double om = pulse_eval(schedule.rabi(), t);
            const double de = pulse_eval(schedule.detuning(), t);
            if (!(om == 0.0 && de == 0.0)) last_theta = mixing_angle(om, de);
            const double s2 = std::sin(last_theta);
            const double c2 = std::cos(last_theta);
            f[static_cast<std::size_t>(k)] = target == TransferTarget::FromGround ? s2 * s2 : c2 * c2;
        }
        total += simpson(f, dx);
    }
    return total;
}

/// exp(-2 Gamma * exposure): final target population predicted by pure
/// adiabatic following with decay of |1>.
inline double analytic_transfer(double gamma, const ScrapSchedule& schedule, TransferTarget target,
                                double step = 0.0) {
    if (!(gamma >= 0.0)) throw DomainError("analytic_transfer: gamma must be >= 0");
    if (gamma == 0.0) return 1.0;
    return std::exp(-2.0 * gamma * decay_exposure(schedule, target, step));
}

}  // namespace scrap
