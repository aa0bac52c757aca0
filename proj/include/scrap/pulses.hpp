#pragma once

// Control waveforms for the pump (Rabi) and Stark (detuning) channels.
//
// Every shape has a closed-form derivative so the adiabaticity parameter can
// be evaluated without finite differences. Shapes are immutable values.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scrap/error.hpp"

namespace scrap {

/// value(t) = slope * t + offset
struct Linear {
    double slope = 0.0;
    double offset = 0.0;
};

/// Constant `level` on the closed interval [t_on, t_off], zero elsewhere.
struct WindowedConstant {
    double level = 0.0;
    double t_on = 0.0;
    double t_off = 0.0;
};

/// peak * exp(-(t - center)^2 / (2 width^2))
struct Gaussian {
    double peak = 0.0;
    double center = 0.0;
    double width = 1.0;
};

class PulseShape;

struct PulseSum {
    std::vector<PulseShape> parts;
};

class PulseShape {
public:
    using Variant = std::variant<Linear, WindowedConstant, Gaussian, PulseSum>;

    PulseShape() : v_(Linear{}) {}
    PulseShape(Linear p) : v_(p) {}
    PulseShape(WindowedConstant p) : v_(p) {
        if (!(p.t_on < p.t_off)) {
            throw DomainError("windowed pulse requires t_on < t_off");
        }
    }
    PulseShape(Gaussian p) : v_(p) {
        if (!(p.width > 0.0)) {
            throw DomainError("gaussian pulse requires width > 0");
        }
    }
    PulseShape(PulseSum p) : v_(std::move(p)) {}

    static PulseShape linear(double slope, double offset = 0.0) { return Linear{slope, offset}; }
    static PulseShape constant(double level) { return Linear{0.0, level}; }
    static PulseShape windowed(double level, double t_on, double t_off) {
        return WindowedConstant{level, t_on, t_off};
    }
    static PulseShape gaussian(double peak, double center, double width) {
        return Gaussian{peak, center, width};
    }
    static PulseShape sum(std::vector<PulseShape> parts) { return PulseSum{std::move(parts)}; }

    const Variant& variant() const { return v_; }

    double operator()(double t) const;
    double derivative(double t) const;

private:
    Variant v_;
};

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace detail

inline double pulse_eval(const PulseShape& shape, double t) {
    return std::visit(
        detail::overloaded{
            [t](const Linear& p) { return p.slope * t + p.offset; },
            [t](const WindowedConstant& p) { return (t >= p.t_on && t <= p.t_off) ? p.level : 0.0; },
            [t](const Gaussian& p) {
                const double x = (t - p.center) / p.width;
                return p.peak * std::exp(-0.5 * x * x);
            },
            [t](const PulseSum& p) {
                double acc = 0.0;
                for (const auto& part : p.parts) acc += pulse_eval(part, t);
                return acc;
            },
        },
        shape.variant());
}

/// Closed-form time derivative. Window edges report the one-sided value 0.
inline double pulse_derivative(const PulseShape& shape, double t) {
    return std::visit(
        detail::overloaded{
            [](const Linear& p) { return p.slope; },
            [](const WindowedConstant&) { return 0.0; },
            [t](const Gaussian& p) {
                const double x = (t - p.center) / p.width;
                return -p.peak * x / p.width * std::exp(-0.5 * x * x);
            },
            [t](const PulseSum& p) {
                double acc = 0.0;
                for (const auto& part : p.parts) acc += pulse_derivative(part, t);
                return acc;
            },
        },
        shape.variant());
}

inline double PulseShape::operator()(double t) const { return pulse_eval(*this, t); }
inline double PulseShape::derivative(double t) const { return pulse_derivative(*this, t); }

/// Multiplies the waveform by `factor`. Closed over every variant, so the
/// result keeps its analytic derivative.
inline PulseShape scaled(const PulseShape& shape, double factor) {
    return std::visit(
        detail::overloaded{
            [factor](const Linear& p) -> PulseShape { return Linear{p.slope * factor, p.offset * factor}; },
            [factor](const WindowedConstant& p) -> PulseShape {
                return WindowedConstant{p.level * factor, p.t_on, p.t_off};
            },
            [factor](const Gaussian& p) -> PulseShape { return Gaussian{p.peak * factor, p.center, p.width}; },
            [factor](const PulseSum& p) -> PulseShape {
                PulseSum out;
                out.parts.reserve(p.parts.size());
                for (const auto& part : p.parts) out.parts.push_back(scaled(part, factor));
                return out;
            },
        },
        shape.variant());
}

/// Times at which the waveform (or its derivative) is discontinuous.
inline void collect_breakpoints(const PulseShape& shape, std::vector<double>& out) {
    std::visit(detail::overloaded{
                   [](const Linear&) {},
                   [&out](const WindowedConstant& p) {
                       out.push_back(p.t_on);
                       out.push_back(p.t_off);
                   },
                   [](const Gaussian&) {},
                   [&out](const PulseSum& p) {
                       for (const auto& part : p.parts) collect_breakpoints(part, out);
                   },
               },
               shape.variant());
}

inline std::vector<double> breakpoints(const PulseShape& shape) {
    std::vector<double> out;
    collect_breakpoints(shape, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Smallest closed interval outside which the waveform is identically zero,
/// if it has one (only windowed pulses and sums of them do).
inline bool support_window(const PulseShape& shape, double& lo, double& hi) {
    return std::visit(detail::overloaded{
                          [](const Linear&) { return false; },
                          [&](const WindowedConstant& p) {
                              lo = p.t_on;
                              hi = p.t_off;
                              return true;
                          },
                          [](const Gaussian&) { return false; },
                          [&](const PulseSum& p) {
                              bool any = false;
                              double l = std::numeric_limits<double>::infinity();
                              double h = -l;
                              for (const auto& part : p.parts) {
                                  double pl = 0.0;
                                  double ph = 0.0;
                                  if (!support_window(part, pl, ph)) return false;
                                  l = std::min(l, pl);
                                  h = std::max(h, ph);
                                  any = true;
                              }
                              if (any) {
                                  lo = l;
                                  hi = h;
                              }
                              return any;
                          },
                      },
                      shape.variant());
}

/// The complete input to the two-level propagator: Rabi frequency and
/// detuning (rad/s), amplitude decay rate of |1> (1/s), the integration span
/// and the passage window (t_b, t_m).
class ScrapSchedule {
public:
    ScrapSchedule(PulseShape rabi, PulseShape detuning, double gamma, double t_start, double t_end,
                  double t_b, double t_m)
        : rabi_(std::move(rabi)),
          detuning_(std::move(detuning)),
          gamma_(gamma),
          t_start_(t_start),
          t_end_(t_end),
          t_b_(t_b),
          t_m_(t_m) {
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
            throw DomainError("schedule: decay rate must be finite and >= 0");
        }
        if (!(t_start < t_b && t_b < t_m && t_m < t_end)) {
            throw DomainError("schedule: requires t_start < t_b < t_m < t_end");
        }
    }

    const PulseShape& rabi() const { return rabi_; }
    const PulseShape& detuning() const { return detuning_; }
    double gamma() const { return gamma_; }
    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double t_b() const { return t_b_; }
    double t_m() const { return t_m_; }

    ScrapSchedule with_gamma(double gamma) const {
        return {rabi_, detuning_, gamma, t_start_, t_end_, t_b_, t_m_};
    }

    /// Union of both channels' discontinuities that fall strictly inside the span.
    std::vector<double> breakpoints() const {
        auto pts = scrap::breakpoints(rabi_);
        auto more = scrap::breakpoints(detuning_);
        pts.insert(pts.end(), more.begin(), more.end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        std::erase_if(pts, [this](double t) { return !(t > t_start_ && t < t_end_); });
        return pts;
    }

private:
    PulseShape rabi_;
    PulseShape detuning_;
    double gamma_;
    double t_start_;
    double t_end_;
    double t_b_;
    double t_m_;
};

/// Counterintuitive SCRAP pair: a linear chirp crossing resonance at the
/// window midpoint and a constant pump on [t_on, t_off]. The chirp is present
/// over the whole span, the pump only inside the window.
inline ScrapSchedule make_counterintuitive_pair(double stark_slope, double pump_level, double t_on,
                                                double t_off, double t_start, double t_end) {
    if (!(t_on < t_off)) throw DomainError("counterintuitive pair: requires t_on < t_off");
    if (pump_level == 0.0) throw DomainError("counterintuitive pair: pump level must be nonzero");
    const double mid = 0.5 * (t_on + t_off);
    return {PulseShape::windowed(pump_level, t_on, t_off),
            PulseShape::linear(stark_slope, -stark_slope * mid),
            0.0,
            t_start,
            t_end,
            t_on,
            t_off};
}

/// Same, with the span padded around the window in the 20:7 ratio of the
/// reference single-qubit geometry ([-10, 10] around [-3.5, 3.5]).
inline ScrapSchedule make_counterintuitive_pair(double stark_slope, double pump_level, double t_on,
                                                double t_off) {
    if (!(t_on < t_off)) throw DomainError("counterintuitive pair: requires t_on < t_off");
    const double mid = 0.5 * (t_on + t_off);
    const double half_span = (t_off - t_on) * (10.0 / 7.0);
    return make_counterintuitive_pair(stark_slope, pump_level, t_on, t_off, mid - half_span, mid + half_span);
}

}  // namespace scrap
