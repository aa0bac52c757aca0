#pragma once

// Calibrated reference scenarios. The device constants are not measured
// values; they were chosen so the reference pulse shapes (Stark ramp
// 0.1 A/ns with a -1.88 nA pump on [-3.5, 3.5] ns for one qubit, Stark ramp
// -3.5 A/ns over [-200, 200] ns for two qubits) give
//   one qubit:  eta_max ~ 0.040, lossless transfer P1 ~ 0.9995
//   two qubits: eta_max ~ 0.0995, lossless transfer P10 ~ 0.99978
// The shipped configs/ files carry the same numbers.

#include "scrap/scrap_single.hpp"
#include "scrap/scrap_two.hpp"

namespace scrap::canonical {

inline constexpr double kNs = 1e-9;

/// T in gamma = Gamma T.
inline constexpr double kSingleQubitTRef = 2e-8;
inline constexpr double kTwoQubitTRef = 4e-7;

inline DeviceParams single_qubit_device() {
    DeviceParams d;
    d.mutual_inductance = 10e-12;
    d.loop_inductance = 1e-9;
    d.delta_00 = 1.0;
    d.delta_11 = 1.00064;
    d.delta_01 = 27.0;
    return d;
}

inline SingleQubitScenario single_qubit(InitialLevel initial = InitialLevel::Ground, double gamma_rate = 0.0) {
    SingleQubitScenario s;
    s.device = single_qubit_device();
    s.stark = PulseShape::linear(0.1 / kNs);                        // I_dc = 0.1 t  (A, t in ns)
    s.pump = PulseShape::windowed(-1.88e-9, -3.5 * kNs, 3.5 * kNs);  // xi = -1.88 nA on the window
    s.gamma = gamma_rate;
    s.t_start = -10.0 * kNs;
    s.t_end = 10.0 * kNs;
    s.initial = initial;
    return s;
}

inline DeviceParams two_qubit_device() {
    DeviceParams d;
    d.mutual_inductance = 5e-17;
    d.loop_inductance = 1e-9;
    d.delta_00 = 0.99;
    d.delta_11 = 1.0;
    d.delta_01 = 0.0;
    d.p_00 = 0.0;
    d.p_11 = 0.0;
    d.p_10 = 1.64 * d.hbar;
    d.coupling_capacitance = 1e-12;
    return d;
}

inline TwoQubitModel two_qubit(BlockState initial = BlockState::S01, double gamma_rate = 0.0) {
    TwoQubitModel m;
    m.device = two_qubit_device();
    m.stark_q2 = PulseShape::linear(-3.5 / kNs);  // I2 = -3.5 t  (A, t in ns)
    m.gamma = gamma_rate;
    m.t_start = -200.0 * kNs;
    m.t_end = 200.0 * kNs;
    m.initial = initial;
    return m;
}

}  // namespace scrap::canonical
