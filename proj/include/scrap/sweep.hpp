#pragma once

// Dissipation sweeps over a fixed scenario. Every gamma runs independently;
// results are assembled in input order whatever order the runs finish in.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include "scrap/adiabatic.hpp"
#include "scrap/dynamics.hpp"
#include "scrap/error.hpp"
#include "scrap/scrap_single.hpp"
#include "scrap/scrap_two.hpp"

namespace scrap {

using Scenario = std::variant<SingleQubitScenario, TwoQubitModel>;

enum class Regime { Weak, Strong, VeryStrong };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Weak: return "weak";
        case Regime::Strong: return "strong";
        case Regime::VeryStrong: return "very_strong";
    }
    return "?";
}

struct RegimeThresholds {
    double weak_below = 0.1;
    double very_strong_from = 10.0;
};

inline Regime regime_classify(double gamma, const RegimeThresholds& th = {}) {
    if (!(gamma >= 0.0)) throw DomainError("regime_classify: gamma must be >= 0");
    if (gamma < th.weak_below) return Regime::Weak;
    if (gamma >= th.very_strong_from) return Regime::VeryStrong;
    return Regime::Strong;
}

inline Scenario with_decay_rate(const Scenario& s, double rate) {
    return std::visit([rate](const auto& x) -> Scenario { return x.with_gamma(rate); }, s);
}

inline double decay_rate_of(const Scenario& s) {
    return std::visit([](const auto& x) { return x.gamma; }, s);
}

inline std::pair<double, double> time_span(const Scenario& s) {
    return std::visit([](const auto& x) { return std::pair{x.t_start, x.t_end}; }, s);
}

inline Trajectory run_scenario(const Scenario& s, PropagationOptions opts = {}, bool full_space = false) {
    return std::visit(
        [&](const auto& x) -> Trajectory {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SingleQubitScenario>) {
                return run_single(x, opts);
            } else {
                return run_iswap(x, opts, full_space);
            }
        },
        s);
}

/// Index into Trajectory populations of the level the transfer targets
/// (block index for the two-qubit model).
inline int target_index(const Scenario& s) {
    return std::visit(
        [](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SingleQubitScenario>) {
                return x.target_level();
            } else {
                return x.target_block_index();
            }
        },
        s);
}

/// Multiplicative loss predicted by adiabatic following: exp(-2 Gamma int sin^2/cos^2 theta)
/// for one qubit, exp(-2 Gamma (t_end - t_start)) for the two-qubit block.
inline double analytic_decay_factor(const Scenario& s, double rate, double step = 0.0) {
    return std::visit(
        [&](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SingleQubitScenario>) {
                return analytic_transfer(rate, x.schedule(), x.transfer_target(), step);
            } else {
                return std::exp(-2.0 * rate * (x.t_end - x.t_start));
            }
        },
        s);
}

inline std::string scenario_id(const Scenario& s) {
    return std::visit(
        [](const auto& x) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SingleQubitScenario>) {
                return x.initial == InitialLevel::Ground ? "single_qubit/ground" : "single_qubit/excited";
            } else {
                return x.initial == BlockState::S01 ? "two_qubit/01" : "two_qubit/10";
            }
        },
        s);
}

struct SweepResult {
    std::string scenario_id;
    double t_ref = 0.0;                   // s, gamma = Gamma * t_ref
    std::vector<double> gamma_values;     // dimensionless
    std::vector<double> decay_rates;      // Gamma, 1/s
    std::vector<double> final_numeric;    // target population at t_end
    std::vector<double> final_analytic;   // P(Gamma=0) * analytic decay factor
    double lossless_final = 0.0;          // target population of the Gamma = 0 run
    // time_gamma_map only: shared time axis and one row per gamma.
    std::vector<double> times;
    std::vector<std::vector<double>> grid;
};

/// Runs task(i) for i in [0, n) on up to `threads` workers. If any task
/// throws, the exception of the lowest failing index is rethrown.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

namespace detail {

inline void check_gamma_grid(const std::vector<double>& gammas, double t_ref) {
    if (gammas.empty()) throw DomainError("sweep: empty gamma list");
    if (!(t_ref > 0.0) || !std::isfinite(t_ref)) throw DomainError("sweep: T_ref must be > 0");
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (!(gammas[i] >= 0.0) || !std::isfinite(gammas[i])) throw DomainError("sweep: gammas must be finite and >= 0");
        if (i > 0 && !(gammas[i] > gammas[i - 1])) throw DomainError("sweep: gammas must be strictly increasing");
    }
}

template <class Fn>
auto annotated(double gamma, Fn&& fn) {
    try {
        return fn();
    } catch (const NumericalError& e) {
        throw NumericalError("gamma = " + std::to_string(gamma) + ": " + e.what());
    } catch (const DomainError& e) {
        throw DomainError("gamma = " + std::to_string(gamma) + ": " + e.what());
    }
}

}  // namespace detail

inline SweepResult gamma_sweep(const Scenario& scenario, const std::vector<double>& gammas, double t_ref,
                               PropagationOptions opts = {}, unsigned threads = 0) {
    detail::check_gamma_grid(gammas, t_ref);
    const int target = target_index(scenario);
    const std::size_t n = gammas.size();
    SweepResult out;
    out.scenario_id = scenario_id(scenario);
    out.t_ref = t_ref;
    out.gamma_values = gammas;
    out.decay_rates.resize(n);
    out.final_numeric.resize(n);
    out.final_analytic.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.decay_rates[i] = gammas[i] / t_ref;

    // Slot n holds the lossless reference run.
    std::vector<double> finals(n + 1);
    std::vector<double> factors(n);
    parallel_for(
        n + 1,
        [&](std::size_t i) {
            const double rate = i < n ? out.decay_rates[i] : 0.0;
            const double g = i < n ? gammas[i] : 0.0;
            detail::annotated(g, [&] {
                const Trajectory tr = run_scenario(with_decay_rate(scenario, rate), opts);
                finals[i] = tr.populations.back()[static_cast<std::size_t>(target)];
                if (i < n) factors[i] = analytic_decay_factor(scenario, rate, opts.step);
                return 0;
            });
        },
        threads);
    out.lossless_final = finals[n];
    for (std::size_t i = 0; i < n; ++i) {
        out.final_numeric[i] = finals[i];
        out.final_analytic[i] = out.lossless_final * factors[i];
    }
    return out;
}

inline SweepResult time_gamma_map(const Scenario& scenario, const std::vector<double>& gammas, double t_ref,
                                  PropagationOptions opts = {}, unsigned threads = 0) {
    detail::check_gamma_grid(gammas, t_ref);
    const auto target = static_cast<std::size_t>(target_index(scenario));
    const std::size_t n = gammas.size();
    SweepResult out;
    out.scenario_id = scenario_id(scenario);
    out.t_ref = t_ref;
    out.gamma_values = gammas;
    out.decay_rates.resize(n);
    out.final_numeric.resize(n);
    out.grid.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.decay_rates[i] = gammas[i] / t_ref;
    std::vector<std::vector<double>> axes(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            detail::annotated(gammas[i], [&] {
                const Trajectory tr = run_scenario(with_decay_rate(scenario, out.decay_rates[i]), opts);
                std::vector<double> row(tr.size());
                for (std::size_t k = 0; k < tr.size(); ++k) row[k] = tr.populations[k][target];
                out.final_numeric[i] = row.back();
                out.grid[i] = std::move(row);
                axes[i] = tr.times;
                return 0;
            });
        },
        threads);
    for (std::size_t i = 1; i < n; ++i) {
        if (axes[i] != axes[0]) throw NumericalError("time_gamma_map: runs did not share a time axis");
    }
    out.times = std::move(axes[0]);
    return out;
}

}  // namespace scrap
