#include "scrap/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "scrap/canonical.hpp"
#include "scrap/scrap_single.hpp"

using namespace scrap;

namespace {

constexpr double ns = 1e-9;

ScrapSchedule constant_schedule(double omega, double delta, double gamma, double t0, double tf) {
    const double q = 0.25 * (tf - t0);
    return {PulseShape::constant(omega), PulseShape::constant(delta), gamma, t0, tf, t0 + q, tf - q};
}

class BothSchemes : public ::testing::TestWithParam<Scheme> {};

}  // namespace

TEST_P(BothSchemes, pure_decay_matches_closed_form) {
    const double gamma = 5e7;
    const auto s = constant_schedule(0.0, 3e9, gamma, 0.0, 40 * ns);
    PropagationOptions o;
    o.scheme = GetParam();
    const auto tr = run_schedule(s, InitialLevel::Excited, o);
    for (std::size_t k = 0; k < tr.size(); ++k) {
        EXPECT_NEAR(tr.populations[k][1], std::exp(-2.0 * gamma * tr.times[k]), 1e-8);
        EXPECT_EQ(tr.populations[k][0], 0.0);
    }
}

TEST_P(BothSchemes, resonant_rabi_matches_closed_form) {
    const double om = 2.0 * std::numbers::pi * 0.25e9;
    const auto s = constant_schedule(om, 0.0, 0.0, 0.0, 20 * ns);
    PropagationOptions o;
    o.scheme = GetParam();
    const auto tr = run_schedule(s, InitialLevel::Ground, o);
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const double x = std::sin(0.5 * om * tr.times[k]);
        EXPECT_NEAR(tr.populations[k][1], x * x, 1e-6);
    }
}

INSTANTIATE_TEST_SUITE_P(dynamics, BothSchemes, ::testing::Values(Scheme::Magnus4, Scheme::RungeKutta4),
                         [](const auto& info) { return std::string(to_string(info.param)); });

// Landau-Zener: constant coupling, linear chirp through resonance. The
// diabatic survival probability exp(-pi Omega^2 / (2 alpha)) is the oracle.
TEST(dynamics, landau_zener_survival) {
    const double alpha = 1e18;
    const double survival = 0.3;
    const double om = std::sqrt(-2.0 * alpha * std::log(survival) / std::numbers::pi);
    for (double half_span : {1000 * ns, 2000 * ns}) {
        const ScrapSchedule s(PulseShape::constant(om), PulseShape::linear(-alpha), 0.0, -half_span, half_span,
                              -0.5 * half_span, 0.5 * half_span);
        PropagationOptions o;
        o.step = 2 * half_span / 400000;
        const auto tr = run_schedule(s, InitialLevel::Ground, o);
        EXPECT_NEAR(tr.populations.back()[0] / survival, 1.0, 0.01) << "half span " << half_span;
    }
}

TEST(dynamics, populations_accessor) {
    const Generator<2> zero([](double) { return CMatrix<2>::Zero().eval(); }, {0.0, 1.0}, 0.0);
    State<2> psi;
    psi << 1.0, 0.0;
    auto tr = propagate<2>(zero, psi, 0.0, 1.0, {.step = 0.1, .record_every = 1});
    EXPECT_EQ(populations(tr, 0), (std::vector<double>{1.0, 0.0}));

    psi << 1.0 / std::sqrt(2.0), cplx(0.0, 1.0 / std::sqrt(2.0));
    tr = propagate<2>(zero, psi, 0.0, 1.0, {.step = 0.1, .record_every = 1});
    EXPECT_NEAR(populations(tr, 0)[0], 0.5, 1e-15);
    EXPECT_NEAR(populations(tr, 0)[1], 0.5, 1e-15);
    EXPECT_THROW(populations(tr, tr.size()), DomainError);
}

TEST(dynamics, trajectory_shape) {
    const auto s = canonical::single_qubit().schedule();
    const auto tr = run_schedule(s, InitialLevel::Ground);
    ASSERT_EQ(tr.size(), 10001u);
    EXPECT_EQ(tr.times.front(), s.t_start());
    EXPECT_EQ(tr.times.back(), s.t_end());
    for (std::size_t k = 1; k < tr.size(); ++k) EXPECT_LT(tr.times[k - 1], tr.times[k]);
    ASSERT_EQ(tr.amplitudes.size(), tr.size());
    ASSERT_EQ(tr.norm.size(), tr.size());
    ASSERT_EQ(tr.theta.size(), tr.size());
    ASSERT_EQ(tr.eta.size(), tr.size());
    for (std::size_t k = 0; k < tr.size(); ++k) {
        EXPECT_NEAR(tr.populations[k][0] + tr.populations[k][1], tr.norm[k] * tr.norm[k], 1e-9);
    }
}

TEST(dynamics, final_sample_lands_on_tf_with_uneven_step) {
    const auto s = constant_schedule(1e9, 0.0, 0.0, 0.0, 1 * ns);
    PropagationOptions o;
    o.step = 0.3 * ns;
    o.record_every = 1;
    const auto tr = run_schedule(s, InitialLevel::Ground, o);
    EXPECT_EQ(tr.times.back(), 1 * ns);
    EXPECT_EQ(tr.size(), 5u);  // t0 plus four equal steps of 0.25 ns
}

TEST(dynamics, breakpoints_are_grid_points) {
    // Window edges off the nominal grid still get their own step boundary.
    const auto s = make_counterintuitive_pair(-1e18, 1e9, -3.3 * ns, 3.7 * ns, -10 * ns, 10 * ns);
    const auto bounds = segment_bounds(s.t_start(), s.t_end(), s.breakpoints());
    EXPECT_EQ(bounds, (std::vector<double>{-10 * ns, -3.3 * ns, 3.7 * ns, 10 * ns}));
}

TEST(dynamics, rejects_bad_inputs) {
    const auto h = two_level_generator(constant_schedule(1e9, 0.0, 0.0, 0.0, 1 * ns));
    const State<2> g = basis_state<2>(0);
    EXPECT_THROW(propagate<2>(h, g, 1.0, 0.0), DomainError);
    EXPECT_THROW(propagate<2>(h, g, 0.0, 1 * ns, {.step = 2 * ns}), DomainError);
    EXPECT_THROW(propagate<2>(h, g, 0.0, 1 * ns, {.step = 0.1 * ns, .record_every = 0}), DomainError);
    State<2> bad;
    bad << 1.0, 1.0;
    EXPECT_THROW(propagate<2>(h, bad, 0.0, 1 * ns), DomainError);

    const Generator<2> nan_gen(
        [](double t) {
            CMatrix<2> m = CMatrix<2>::Zero();
            if (t > 0.5) m(0, 1) = std::nan("");
            return m;
        },
        {0.0, 1.0}, 0.0);
    EXPECT_THROW(propagate<2>(nan_gen, g, 0.0, 1.0, {.step = 0.01}), NumericalError);
    EXPECT_THROW(propagate<2>(nan_gen, g, 0.0, 1.0, {.step = 0.01, .scheme = Scheme::RungeKutta4}),
                 NumericalError);
}

TEST(dynamics, generator_structure) {
    const auto s = canonical::single_qubit(InitialLevel::Ground, 2.5e7).schedule();
    const auto h = two_level_generator(s);
    for (double t : {-9 * ns, -3.5 * ns, 0.0, 1.7 * ns, 9 * ns}) {
        const auto herm = hermitian_reference(h)(t);
        const double scale = herm.cwiseAbs().maxCoeff();
        EXPECT_LE((herm - herm.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * scale);
        // Anti-Hermitian part: diagonal, negative semidefinite.
        const CMatrix<2> m = h(t);
        const CMatrix<2> anti = 0.5 * (m - m.adjoint());
        EXPECT_EQ(anti(0, 1), cplx(0.0));
        EXPECT_EQ(anti(1, 0), cplx(0.0));
        EXPECT_LE(anti(0, 0).imag(), 0.0);
        EXPECT_LE(anti(1, 1).imag(), 0.0);
        EXPECT_DOUBLE_EQ(anti(1, 1).imag(), -2.5e7);
    }
}

TEST(dynamics, hermitian_reference_is_idempotent) {
    const auto h = two_level_generator(canonical::single_qubit(InitialLevel::Ground, 1e8).schedule());
    const auto once = hermitian_reference(h);
    const auto twice = hermitian_reference(once);
    EXPECT_EQ(once.gamma(), 0.0);
    const CMatrix<2> m = once(0.0);
    const CMatrix<2> anti = 0.5 * (m - m.adjoint());
    EXPECT_EQ(anti, CMatrix<2>::Zero());
    for (double t : {-5 * ns, 0.0, 2 * ns}) EXPECT_EQ(once(t), twice(t));
}

TEST(dynamics, norm_conserved_without_decay) {
    for (auto initial : {InitialLevel::Ground, InitialLevel::Excited}) {
        const auto tr = run_single(canonical::single_qubit(initial));
        for (double n : tr.norm) EXPECT_NEAR(n, 1.0, 1e-9);
    }
}

TEST(dynamics, norm_monotone_with_decay) {
    const auto tr = run_single(canonical::single_qubit(InitialLevel::Ground, 0.5 / canonical::kSingleQubitTRef));
    for (std::size_t k = 1; k < tr.size(); ++k) EXPECT_LE(tr.norm[k], tr.norm[k - 1] + 1e-12);
    EXPECT_LT(tr.norm.back(), 0.9);
}

TEST(dynamics, step_halving_converged) {
    for (double gamma : {0.0, 1.0 / canonical::kSingleQubitTRef}) {
        const auto sc = canonical::single_qubit(InitialLevel::Ground, gamma);
        PropagationOptions fine;
        fine.step = (sc.t_end - sc.t_start) / (2 * kDefaultSteps);
        fine.record_every = 2 * kDefaultRecordEvery;
        const auto a = run_single(sc);
        const auto b = run_single(sc, fine);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            ASSERT_NEAR(a.times[k], b.times[k], 1e-20);
            for (int i = 0; i < 2; ++i) EXPECT_NEAR(a.populations[k][i], b.populations[k][i], 1e-8);
        }
    }
}

namespace {

void expect_gauge_invariant(const ScrapSchedule& s, Scheme scheme) {
    const ScrapSchedule flipped(scaled(s.rabi(), -1.0), s.detuning(), s.gamma(), s.t_start(), s.t_end(), s.t_b(),
                                s.t_m());
    PropagationOptions o;
    o.scheme = scheme;
    const auto a = run_schedule(s, InitialLevel::Ground, o);
    const auto b = run_schedule(flipped, InitialLevel::Ground, o);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (int i = 0; i < 2; ++i) EXPECT_NEAR(a.populations[k][i], b.populations[k][i], 1e-12);
    }
}

ScrapSchedule gentle_schedule() {
    // Slow chirp with a smooth Gaussian pump: both integrators resolve it.
    return {PulseShape::gaussian(3e9, 0.0, 2 * ns), PulseShape::linear(-1e17), 1e7, -10 * ns, 10 * ns, -3 * ns,
            3 * ns};
}

}  // namespace

TEST(dynamics, rabi_sign_is_a_gauge) {
    expect_gauge_invariant(canonical::single_qubit(InitialLevel::Ground, 0.3 / canonical::kSingleQubitTRef).schedule(),
                           Scheme::Magnus4);
    expect_gauge_invariant(gentle_schedule(), Scheme::RungeKutta4);
}

TEST(dynamics, schemes_agree_on_a_gentle_problem) {
    const auto s = gentle_schedule();
    PropagationOptions m;
    PropagationOptions r;
    r.scheme = Scheme::RungeKutta4;
    const auto a = run_schedule(s, InitialLevel::Ground, m);
    const auto b = run_schedule(s, InitialLevel::Ground, r);
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (int i = 0; i < 2; ++i) EXPECT_NEAR(a.populations[k][i], b.populations[k][i], 1e-9);
    }
}

TEST(dynamics, four_level_block_exponential) {
    // Decoupled |00> and |11> evolve by exact scalar factors.
    const double g = 3e6;
    const Generator<4> h(
        [](double) {
            CMatrix<4> m = CMatrix<4>::Zero();
            m(0, 0) = 7e11;
            m(1, 1) = 1e9;
            m(2, 2) = -1e9;
            m(1, 2) = m(2, 1) = 5e8;
            m(3, 3) = -4e11;
            return m;
        },
        {0.0, 1.0, 1.0, 2.0}, g);
    State<4> psi;
    psi << 0.5, 0.5, 0.5, 0.5;
    const auto tr = propagate<4>(h, psi, 0.0, 100 * ns);
    for (std::size_t k = 0; k < tr.size(); ++k) {
        // 2e5 unit-modulus phase products: rounding drift ~ N eps.
        EXPECT_NEAR(tr.populations[k][0], 0.25, kDefaultSteps * 1e-16);
        EXPECT_NEAR(tr.populations[k][3], 0.25 * std::exp(-4.0 * g * tr.times[k]), 1e-8);
    }
}
