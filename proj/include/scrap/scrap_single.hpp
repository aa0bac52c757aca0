#pragma once

// Single flux-biased Josephson qubit driven by a pump current xi(t) and a
// Stark current I_dc(t). Matching the interaction-picture Hamiltonian to the
// two-level form gives
//   hbar Omega(t) / 2 = -(Phi0 / 2 pi) (xi(t) / 2) delta_01
//   hbar Delta(t)     = -(Phi0 / 2 pi) M I_dc(t) (delta_11 - delta_00) / L

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scrap/adiabatic.hpp"
#include "scrap/dynamics.hpp"
#include "scrap/error.hpp"
#include "scrap/pulses.hpp"

namespace scrap {

struct DeviceParams {
    double flux_quantum = 2.067833848e-15;  // Wb
    double hbar = 1.054571817e-34;          // J s
    double mutual_inductance = 0.0;         // H
    double loop_inductance = 0.0;           // H
    double delta_00 = 0.0;
    double delta_11 = 0.0;
    double delta_01 = 0.0;
    double p_00 = 0.0;                   // J s
    double p_11 = 0.0;                   // J s
    double p_10 = 0.0;                   // J s
    double coupling_capacitance = 0.0;   // F, C_m = C_J (1 + zeta) / zeta

    /// Phi0 / (2 pi hbar), i.e. 1 / 2e in SI.
    double phase_to_rate() const { return flux_quantum / (2.0 * std::numbers::pi * hbar); }

    void validate(bool needs_coupling) const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("device: ") + name + " must be > 0");
        };
        positive(flux_quantum, "flux_quantum");
        positive(hbar, "hbar");
        positive(mutual_inductance, "mutual_inductance");
        positive(loop_inductance, "loop_inductance");
        if (needs_coupling) positive(coupling_capacitance, "coupling_capacitance");
        if (delta_11 == delta_00) throw DomainError("device: delta_11 == delta_00 gives no Stark chirp");
    }
};

/// Rabi frequency and detuning (rad/s) for given current waveforms (A).
inline std::pair<PulseShape, PulseShape> josephson_map(const DeviceParams& device, const PulseShape& i_dc,
                                                       const PulseShape& xi) {
    device.validate(false);
    const double k = device.phase_to_rate();
    PulseShape rabi = scaled(xi, -k * device.delta_01);
    PulseShape detuning =
        scaled(i_dc, -k * device.mutual_inductance * (device.delta_11 - device.delta_00) / device.loop_inductance);
    return {std::move(rabi), std::move(detuning)};
}

/// H/hbar = [[0, Omega/2], [Omega/2, Delta]] - i Gamma |1><1|
inline Generator<2> two_level_generator(const ScrapSchedule& schedule) {
    auto rabi = schedule.rabi();
    auto det = schedule.detuning();
    return Generator<2>(
        [rabi = std::move(rabi), det = std::move(det)](double t) {
            const double half = 0.5 * pulse_eval(rabi, t);
            CMatrix<2> m;
            m << 0.0, half, half, pulse_eval(det, t);
            return m;
        },
        {0.0, 1.0}, schedule.gamma(), schedule.breakpoints());
}

enum class InitialLevel { Ground, Excited };

struct SingleQubitScenario {
    DeviceParams device;
    PulseShape stark;  // I_dc(t), A
    PulseShape pump;   // xi(t), A
    double gamma = 0.0;  // Gamma, 1/s
    double t_start = 0.0;
    double t_end = 0.0;
    InitialLevel initial = InitialLevel::Ground;
    // Defaults to the pump's support when unset.
    std::optional<std::pair<double, double>> passage_window;

    std::pair<double, double> window() const {
        if (passage_window) return *passage_window;
        double lo = 0.0;
        double hi = 0.0;
        if (!support_window(pump, lo, hi)) {
            throw DomainError("scenario: pump has no finite support; set the passage window explicitly");
        }
        return {lo, hi};
    }

    ScrapSchedule schedule() const {
        if (!(t_start < t_end)) throw DomainError("scenario: requires t_start < t_end");
        if (!(gamma >= 0.0)) throw DomainError("scenario: gamma must be >= 0");
        auto [rabi, detuning] = josephson_map(device, stark, pump);
        const auto [tb, tm] = window();
        return {std::move(rabi), std::move(detuning), gamma, t_start, t_end, tb, tm};
    }

    SingleQubitScenario with_gamma(double g) const {
        SingleQubitScenario s = *this;
        s.gamma = g;
        return s;
    }

    /// Index of the level the passage delivers population to.
    int target_level() const { return initial == InitialLevel::Ground ? 1 : 0; }
    TransferTarget transfer_target() const {
        return initial == InitialLevel::Ground ? TransferTarget::FromGround : TransferTarget::FromExcited;
    }
};

inline Trajectory run_schedule(const ScrapSchedule& schedule, InitialLevel initial, PropagationOptions opts = {}) {
    const auto h = two_level_generator(schedule);
    const State<2> psi0 = basis_state<2>(initial == InitialLevel::Ground ? 0 : 1);
    Trajectory traj = propagate<2>(h, psi0, schedule.t_start(), schedule.t_end(), opts);
    annotate_adiabatic(traj, schedule);
    return traj;
}

inline Trajectory run_single(const SingleQubitScenario& scenario, PropagationOptions opts = {}) {
    return run_schedule(scenario.schedule(), scenario.initial, opts);
}

/// Least-squares decay rate Gamma from a population tail P ~ exp(-2 Gamma t):
/// returns -1/2 times the fitted slope of ln P over samples with t in [lo, hi].
inline double decay_rate_fit(const Trajectory& traj, std::pair<double, double> window, int level) {
    const auto [lo, hi] = window;
    if (!(lo < hi)) throw DomainError("decay_rate_fit: empty window");
    if (traj.size() == 0 || lo < traj.times.front() || hi > traj.times.back()) {
        throw DomainError("decay_rate_fit: window outside the trajectory time range");
    }
    if (level < 0 || level >= traj.dimension) throw DomainError("decay_rate_fit: level out of range");
    std::vector<double> ts;
    std::vector<double> ys;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        if (t < lo || t > hi) continue;
        const double p = traj.populations[k][static_cast<std::size_t>(level)];
        if (!(p > 0.0)) throw DomainError("decay_rate_fit: nonpositive population inside the window");
        ts.push_back(t);
        ys.push_back(std::log(p));
    }
    if (ts.size() < 10) throw DomainError("decay_rate_fit: fewer than 10 samples in the window");
    const double n = static_cast<double>(ts.size());
    double tm = 0.0;
    double ym = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tm += ts[i];
        ym += ys[i];
    }
    tm /= n;
    ym /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxy += (ts[i] - tm) * (ys[i] - ym);
        sxx += (ts[i] - tm) * (ts[i] - tm);
    }
    return -0.5 * sxy / sxx;
}

/// [t_m + 5% of the tail, t_end]: after the passage, skipping transients.
inline std::pair<double, double> post_passage_window(const ScrapSchedule& s) {
    return {s.t_m() + 0.05 * (s.t_end() - s.t_m()), s.t_end()};
}

/// [t_start, t_b - 5% of the lead-in]: before the passage.
inline std::pair<double, double> pre_passage_window(const ScrapSchedule& s) {
    return {s.t_start(), s.t_b() - 0.05 * (s.t_b() - s.t_start())};
}

}  // namespace scrap
