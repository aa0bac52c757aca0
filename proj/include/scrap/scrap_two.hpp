#pragma once

// Two capacitively coupled, identical flux-biased qubits with a Stark current
// I2(t) on the second qubit. In the basis (|00>, |01>, |10>, |11>):
//
//   H/hbar = diag(D00, D01 - iG, D10 - iG, D11 - 2iG) + W (|01><10| + |10><01|)
//
//   Dij = -(M Phi0 / 2 pi L) I2(t) delta_jj + (2 pi / Phi0)^2 p_ii p_jj / C_m   (over hbar)
//   W   = (2 pi / Phi0)^2 p_10^2 / C_m                                          (over hbar)
//
// |00> and |11> never couple, so transfer happens inside the {|01>, |10>}
// block, whose anti-Hermitian part is -iG times the identity.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "scrap/adiabatic.hpp"
#include "scrap/dynamics.hpp"
#include "scrap/error.hpp"
#include "scrap/pulses.hpp"
#include "scrap/scrap_single.hpp"

namespace scrap {

enum class BlockState { S01, S10 };

struct TwoQubitModel {
    DeviceParams device;
    PulseShape stark_q2;  // I2(t), A
    double gamma = 0.0;   // Gamma, 1/s
    double t_start = 0.0;
    double t_end = 0.0;
    BlockState initial = BlockState::S01;
    // Defaults to the middle half of the span.
    std::optional<std::pair<double, double>> passage_window;

    void validate() const {
        device.validate(true);
        if (!(t_start < t_end)) throw DomainError("two-qubit model: requires t_start < t_end");
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("two-qubit model: gamma must be >= 0");
    }

    TwoQubitModel with_gamma(double g) const {
        TwoQubitModel m = *this;
        m.gamma = g;
        return m;
    }

    std::pair<double, double> window() const {
        if (passage_window) return *passage_window;
        const double q = 0.25 * (t_end - t_start);
        return {t_start + q, t_end - q};
    }

    /// Block index (0 = |01>, 1 = |10>) that receives the population.
    int target_block_index() const { return initial == BlockState::S01 ? 1 : 0; }
};

/// Stark coefficient (rad/s per A) and the static coupling term (rad/s) for
/// product p_a p_b.
struct TwoQubitCoefficients {
    double stark = 0.0;  // (M Phi0 / 2 pi L) / hbar
    double coupling_scale = 0.0;  // (2 pi / Phi0)^2 / (C_m hbar)

    explicit TwoQubitCoefficients(const DeviceParams& d)
        : stark(d.phase_to_rate() * d.mutual_inductance / d.loop_inductance),
          coupling_scale(std::pow(2.0 * std::numbers::pi / d.flux_quantum, 2) / (d.coupling_capacitance * d.hbar)) {}

    double static_term(double pa, double pb) const { return coupling_scale * pa * pb; }
};

/// Diagonal energies (D00, D01, D10, D11) and the coupling W, all in rad/s.
struct TwoQubitLevels {
    std::array<double, 4> diag{};
    double coupling = 0.0;
};

inline TwoQubitLevels two_qubit_levels(const DeviceParams& d, double i2) {
    const TwoQubitCoefficients c(d);
    TwoQubitLevels out;
    out.diag[0] = -c.stark * i2 * d.delta_00 + c.static_term(d.p_00, d.p_00);
    out.diag[1] = -c.stark * i2 * d.delta_11 + c.static_term(d.p_00, d.p_11);
    out.diag[2] = -c.stark * i2 * d.delta_00 + c.static_term(d.p_11, d.p_00);
    out.diag[3] = -c.stark * i2 * d.delta_11 + c.static_term(d.p_11, d.p_11);
    out.coupling = c.static_term(d.p_10, d.p_10);
    return out;
}

inline Generator<4> build_two_qubit_h(const TwoQubitModel& model) {
    model.validate();
    auto device = model.device;
    auto stark = model.stark_q2;
    return Generator<4>(
        [device, stark = std::move(stark)](double t) {
            const auto lv = two_qubit_levels(device, pulse_eval(stark, t));
            CMatrix<4> m = CMatrix<4>::Zero();
            for (int i = 0; i < 4; ++i) m(i, i) = lv.diag[static_cast<std::size_t>(i)];
            m(1, 2) = lv.coupling;
            m(2, 1) = lv.coupling;
            return m;
        },
        {0.0, 1.0, 1.0, 2.0}, model.gamma, breakpoints(model.stark_q2));
}

inline constexpr double kOffBlockTolerance = 1e-14;

/// The {|01>, |10>} block of a four-level generator. Every evaluation checks
/// that the block is decoupled from |00> and |11>.
inline Generator<2> reduce_subspace(const Generator<4>& h4) {
    const auto& w = h4.decay_weights();
    return Generator<2>(
        [h4](double t) {
            const CMatrix<4> m = h4.hermitian_part(t);
            for (int i : {1, 2}) {
                for (int j : {0, 3}) {
                    if (std::abs(m(i, j)) > kOffBlockTolerance || std::abs(m(j, i)) > kOffBlockTolerance) {
                        throw DomainError("reduce_subspace: block couples to |00> or |11> at t = " +
                                          std::to_string(t));
                    }
                }
            }
            CMatrix<2> b;
            b << m(1, 1), m(1, 2), m(2, 1), m(2, 2);
            return b;
        },
        {w[1], w[2]}, h4.gamma(), h4.breakpoints());
}

struct ReducedAdiabatic {
    double eps_plus = 0.0;
    double eps_minus = 0.0;
    double uniform_decay = 0.0;
};

/// Diagonal of the block Hamiltonian in its adiabatic basis:
/// eps_pm = (D10 - D01 +/- sqrt(4 W^2 + (D10 - D01)^2)) / 2, with the same
/// decay Gamma on both entries.
inline ReducedAdiabatic reduced_adiabatic_h(double delta01, double delta10, double omega01, double gamma) {
    const double d = delta10 - delta01;
    const double root = std::sqrt(4.0 * omega01 * omega01 + d * d);
    return {0.5 * (d + root), 0.5 * (d - root), gamma};
}

/// The block written in two-level form (up to a trace shift): Rabi frequency
/// 2W and detuning D10 - D01. Used for the mixing angle and eta; decay is not
/// part of this view.
inline ScrapSchedule effective_schedule(const TwoQubitModel& model) {
    model.validate();
    const auto& d = model.device;
    const TwoQubitCoefficients c(d);
    const double coupling = c.static_term(d.p_10, d.p_10);
    const double offset = c.static_term(d.p_11, d.p_00) - c.static_term(d.p_00, d.p_11);
    PulseShape detuning = scaled(model.stark_q2, c.stark * (d.delta_11 - d.delta_00));
    if (offset != 0.0) detuning = PulseShape::sum({detuning, PulseShape::constant(offset)});
    const auto [tb, tm] = model.window();
    return {PulseShape::constant(2.0 * coupling), std::move(detuning), 0.0, model.t_start, model.t_end, tb, tm};
}

/// Propagates the {|01>, |10>} block (dimension 2, order |01>, |10>), or the
/// full four-level space when `full_space` is set (order |00>, |01>, |10>, |11>).
inline Trajectory run_iswap(const TwoQubitModel& model, PropagationOptions opts = {}, bool full_space = false) {
    const auto h4 = build_two_qubit_h(model);
    if (full_space) {
        const State<4> psi0 = basis_state<4>(model.initial == BlockState::S01 ? 1 : 2);
        return propagate<4>(h4, psi0, model.t_start, model.t_end, opts);
    }
    const auto h2 = reduce_subspace(h4);
    const State<2> psi0 = basis_state<2>(model.initial == BlockState::S01 ? 0 : 1);
    Trajectory traj = propagate<2>(h2, psi0, model.t_start, model.t_end, opts);
    annotate_adiabatic(traj, effective_schedule(model));
    return traj;
}

}  // namespace scrap
