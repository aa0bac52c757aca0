#include "scrap/adiabatic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "scrap/canonical.hpp"
#include "scrap/scrap_single.hpp"

using namespace scrap;

namespace {
constexpr double ns = 1e-9;
constexpr double pi = std::numbers::pi;

// Gaussian Stark pulse on a detuning offset: the chirp crosses resonance on
// the flank of a weak Gaussian pump, far from adiabatic.
ScrapSchedule gaussian_stark_counterexample() {
    const auto rabi = PulseShape::gaussian(1e9, 0.0, 2 * ns);
    const auto detuning = PulseShape::sum({PulseShape::constant(5e10), PulseShape::gaussian(-1e11, 0.0, 2 * ns)});
    return {rabi, detuning, 0.0, -10 * ns, 10 * ns, -3.5 * ns, 3.5 * ns};
}
}  // namespace

TEST(mixing_angle, limits) {
    EXPECT_EQ(mixing_angle(0.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(mixing_angle(2.0, 0.0), pi / 4);
    EXPECT_DOUBLE_EQ(mixing_angle(0.0, -1.0), pi / 2);
    EXPECT_EQ(mixing_angle(0.0, 0.0), 0.0);
    // Sign of the coupling is a gauge.
    EXPECT_EQ(mixing_angle(-3.0, 0.7), mixing_angle(3.0, 0.7));
}

TEST(mixing_angle, continuous_through_resonance) {
    const double om = 1.0;
    double prev = mixing_angle(om, 1e3);
    for (int k = 1; k <= 20000; ++k) {
        const double de = 1e3 - k * 0.1;
        const double th = mixing_angle(om, de);
        EXPECT_GE(th, prev);
        EXPECT_LT(th - prev, 0.05);
        prev = th;
    }
    EXPECT_GT(prev, pi / 2 - 1e-3);
}

TEST(adiabatic_energies, examples) {
    EXPECT_EQ(adiabatic_energies(5.0, 0.0), (std::pair{5.0, -5.0}));
    EXPECT_EQ(adiabatic_energies(0.0, 2.5), (std::pair{5.0, 0.0}));
    EXPECT_EQ(adiabatic_energies(3.0, 4.0), (std::pair{9.0, -1.0}));
}

TEST(adiabatic_frame, gap_invariant) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e12, 1e12);
    for (int i = 0; i < 1000; ++i) {
        const double om = u(rng);
        const double de = u(rng);
        const auto f = adiabatic_frame(om, de);
        EXPECT_GE(f.eps_plus, f.eps_minus);
        const double gap = 2.0 * std::sqrt(de * de + om * om);
        EXPECT_LE(std::abs((f.eps_plus - f.eps_minus) - gap), 1e-12 * gap);
        EXPECT_GE(f.theta, 0.0);
        EXPECT_LE(f.theta, pi / 2);
    }
}

TEST(adiabaticity_eta, examples) {
    EXPECT_EQ(adiabaticity_eta(3.0, 0.0, 4.0, 0.0), 0.0);
    const double om0 = 1.6e11;
    const double alpha = 2e21;
    EXPECT_DOUBLE_EQ(adiabaticity_eta(om0, 0.0, 0.0, alpha), alpha / (2 * om0 * om0));
    EXPECT_TRUE(std::isinf(adiabaticity_eta(0.0, 1.0, 0.0, 1.0)));
}

// eta is dimensionless under time rescaling: (Omega, Delta) -> c (Omega, Delta)
// with rates -> c^2 rates. Scaling rates by c alone scales eta by 1/c.
TEST(adiabaticity_eta, scale_invariance) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double c : {2.0, 10.0}) {
        for (int i = 0; i < 500; ++i) {
            const double om = u(rng), omd = u(rng), de = u(rng), ded = u(rng);
            const double base = adiabaticity_eta(om, omd, de, ded);
            const double rescaled = adiabaticity_eta(c * om, c * c * omd, c * de, c * c * ded);
            EXPECT_NEAR(rescaled, base, 1e-12 * std::max(1.0, base));
            const double linear = adiabaticity_eta(c * om, c * omd, c * de, c * ded);
            EXPECT_NEAR(linear * c, base, 1e-12 * std::max(1.0, base));
        }
    }
}

TEST(to_adiabatic_frame, examples) {
    State<2> g;
    g << 1.0, 0.0;
    auto [p0, m0] = to_adiabatic_frame(g, 0.0);
    EXPECT_EQ(p0, cplx(0.0));
    EXPECT_EQ(m0, cplx(1.0));
    auto [p1, m1] = to_adiabatic_frame(g, pi / 2);
    EXPECT_NEAR(std::abs(p1 - cplx(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(m1), 0.0, 1e-15);
    auto [p2, m2] = to_adiabatic_frame(g, pi / 4);
    EXPECT_NEAR(p2.real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(m2.real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(to_adiabatic_frame(std::vector<cplx>{1.0, 0.0, 0.0}, 0.1), DomainError);
}

TEST(to_adiabatic_frame, isometry) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> th(0.0, pi / 2);
    for (int i = 0; i < 1000; ++i) {
        State<2> psi;
        psi << cplx(n(rng), n(rng)), cplx(n(rng), n(rng));
        const double before = psi.squaredNorm();
        const auto [a, b] = to_adiabatic_frame(psi, th(rng));
        EXPECT_NEAR(std::norm(a) + std::norm(b), before, 1e-12 * before);
    }
}

TEST(simpson, exact_on_cubics_and_trapezoid_tail) {
    std::vector<double> f;
    for (int i = 0; i <= 10; ++i) {
        const double x = i * 0.1;
        f.push_back(x * x * x);
    }
    EXPECT_NEAR(simpson(f, 0.1), 0.25, 1e-15);
    // Odd interval count: Simpson on [0, 0.9], trapezoid on the last step.
    std::vector<double> g(12, 2.0);
    EXPECT_NEAR(simpson(g, 0.5), 11 * 0.5 * 2.0, 1e-14);
    EXPECT_EQ(simpson({1.0}, 1.0), 0.0);
}

TEST(analytic_transfer, lossless_is_one) {
    const auto s = canonical::single_qubit().schedule();
    EXPECT_EQ(analytic_transfer(0.0, s, TransferTarget::FromGround), 1.0);
    EXPECT_EQ(analytic_transfer(0.0, s, TransferTarget::FromExcited), 1.0);
    EXPECT_THROW(analytic_transfer(-1.0, s, TransferTarget::FromGround), DomainError);
}

TEST(analytic_transfer, equal_mixing_gives_half_rate) {
    // Delta = 0 with a constant coupling holds theta at pi/4.
    const double d = 20 * ns;
    const double gamma = 3e7;
    const ScrapSchedule s(PulseShape::constant(1e10), PulseShape::constant(0.0), gamma, 0.0, d, 5 * ns, 15 * ns);
    for (auto target : {TransferTarget::FromGround, TransferTarget::FromExcited}) {
        const double expected = std::exp(-gamma * d);
        EXPECT_NEAR(analytic_transfer(gamma, s, target), expected, 1e-12 * expected);
    }
}

TEST(eta_profile_max, constant_schedule_is_zero) {
    const ScrapSchedule s(PulseShape::constant(1e9), PulseShape::constant(3e9), 0.0, 0.0, 1.0, 0.25, 0.75);
    EXPECT_EQ(eta_profile_max(s, 101), 0.0);
    EXPECT_THROW(eta_profile_max(s, 1), DomainError);
}

TEST(eta_profile_max, canonical_single_qubit_is_adiabatic) {
    EXPECT_LE(eta_profile_max(canonical::single_qubit().schedule(), 20001), 0.05);
}

TEST(eta_profile_max, gaussian_stark_counterexample_is_not_adiabatic) {
    const double eta = eta_profile_max(gaussian_stark_counterexample(), 20001);
    EXPECT_GT(eta, 10.0);
    // Closed form at the crossing: eta = dDelta/dt / (2 Omega^2).
    const double tc = 2 * ns * std::sqrt(2 * std::log(2.0));
    const double om = 0.5e9;
    const double dde = 1e11 * 0.5 * tc / (4 * ns * ns);
    EXPECT_NEAR(eta, dde / (2 * om * om), 0.01 * eta);
}

TEST(branch, theta_sweeps_zero_to_half_pi_continuously) {
    const auto tr = run_single(canonical::single_qubit());
    ASSERT_EQ(tr.theta.size(), tr.size());
    // The passage lasts ~2 Omega0 / alpha ~ 0.16 ns; default recording resolves it.
    ASSERT_GE(tr.size(), 10000u);
    EXPECT_LT(tr.theta.front(), 0.01);
    EXPECT_GT(tr.theta.back(), pi / 2 - 0.01);
    for (std::size_t k = 1; k < tr.size(); ++k) {
        EXPECT_GE(tr.theta[k], tr.theta[k - 1]);
        EXPECT_LT(tr.theta[k] - tr.theta[k - 1], 0.05) << "t = " << tr.times[k];
    }
}

TEST(branch, hold_last_across_degenerate_point) {
    // Delta passes zero at t = 0 while the pump is off.
    const ScrapSchedule s(PulseShape::windowed(1.0, 1.0, 2.0), PulseShape::linear(-1.0), 0.0, -3.0, 3.0, 1.0, 2.0);
    Trajectory tr;
    tr.dimension = 2;
    tr.times = {-1.0, 0.0, 1.5};
    tr.populations.assign(3, {1.0, 0.0});
    tr.amplitudes.assign(3, {1.0, 0.0});
    tr.norm.assign(3, 1.0);
    annotate_adiabatic(tr, s);
    EXPECT_EQ(tr.theta[0], 0.0);
    EXPECT_EQ(tr.theta[1], tr.theta[0]);
    EXPECT_TRUE(std::isinf(tr.eta[1]));
}

TEST(consistency, analytic_matches_propagation_when_weak_and_adiabatic) {
    for (double g : {0.0, 0.01, 0.05, 0.1}) {
        const auto sc = canonical::single_qubit(InitialLevel::Ground, g / canonical::kSingleQubitTRef);
        const auto tr = run_single(sc);
        const double an = analytic_transfer(sc.gamma, sc.schedule(), TransferTarget::FromGround);
        EXPECT_NEAR(tr.populations.back()[1], an, 0.005) << "gamma = " << g;
    }
}

TEST(consistency, canonical_half_gamma_within_one_percent) {
    const auto sc = canonical::single_qubit(InitialLevel::Ground, 0.5 / canonical::kSingleQubitTRef);
    const auto tr = run_single(sc);
    EXPECT_NEAR(tr.populations.back()[1], analytic_transfer(sc.gamma, sc.schedule(), TransferTarget::FromGround),
                0.01);
}
