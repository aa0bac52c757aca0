#include "scrap/pulses.hpp"

#include <cstring>
#include <cmath>
#include <random>

#include "gtest/gtest.h"

using namespace scrap;

namespace {
constexpr double ns = 1e-9;
}

TEST(pulses, linear_eval) {
    // Stark ramp I_dc(t) = 0.1 t
    EXPECT_DOUBLE_EQ(pulse_eval(PulseShape::linear(0.1), 2.0), 0.2);
    EXPECT_EQ(pulse_derivative(PulseShape::linear(0.1, 7.0), -123.0), 0.1);
}

TEST(pulses, windowed_constant_is_closed_window) {
    const auto w = PulseShape::windowed(-1.88e-9, -3.5 * ns, 3.5 * ns);
    EXPECT_EQ(pulse_eval(w, 5 * ns), 0.0);
    EXPECT_EQ(pulse_eval(w, -5 * ns), 0.0);
    EXPECT_EQ(pulse_eval(w, 0.0), -1.88e-9);
    EXPECT_EQ(pulse_eval(w, -3.5 * ns), -1.88e-9);
    EXPECT_EQ(pulse_eval(w, 3.5 * ns), -1.88e-9);
    EXPECT_EQ(pulse_eval(w, std::nextafter(3.5 * ns, 1.0)), 0.0);
    EXPECT_EQ(pulse_derivative(w, 0.0), 0.0);
    EXPECT_EQ(pulse_derivative(w, 3.5 * ns), 0.0);
}

TEST(pulses, gaussian_peak) {
    const auto g = PulseShape::gaussian(1.0, 0.0, 2 * ns);
    EXPECT_EQ(pulse_eval(g, 0.0), 1.0);
    EXPECT_EQ(pulse_derivative(g, 0.0), 0.0);
    EXPECT_NEAR(pulse_eval(g, 2 * ns), std::exp(-0.5), 1e-15);
}

TEST(pulses, invalid_shapes_rejected) {
    EXPECT_THROW(PulseShape::windowed(1.0, 2.0, 2.0), DomainError);
    EXPECT_THROW(PulseShape::windowed(1.0, 3.0, 2.0), DomainError);
    EXPECT_THROW(PulseShape::gaussian(1.0, 0.0, 0.0), DomainError);
    EXPECT_THROW(PulseShape::gaussian(1.0, 0.0, -1.0), DomainError);
}

TEST(pulses, sum_is_exactly_linear) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-20 * ns, 20 * ns);
    const auto a = PulseShape::gaussian(3.7, 1 * ns, 2.5 * ns);
    const auto b = PulseShape::windowed(0.3, -4 * ns, 6 * ns);
    const auto s = PulseShape::sum({a, b});
    for (int i = 0; i < 1000; ++i) {
        const double t = u(rng);
        EXPECT_EQ(pulse_eval(s, t), pulse_eval(a, t) + pulse_eval(b, t));
        EXPECT_EQ(pulse_derivative(s, t), pulse_derivative(a, t) + pulse_derivative(b, t));
    }
}

TEST(pulses, evaluation_is_deterministic) {
    const auto s = PulseShape::sum({PulseShape::gaussian(2.0, 0.1, 0.7), PulseShape::linear(-3.0, 1.0)});
    const double v1 = pulse_eval(s, 0.123456789);
    const double v2 = pulse_eval(s, 0.123456789);
    EXPECT_EQ(std::memcmp(&v1, &v2, sizeof v1), 0);
}

// Property: analytic derivative agrees with central differences at random
// interior points, for every variant.
TEST(pulses, derivative_matches_central_differences) {
    const double scale = 10 * ns;
    const double h = 1e-6 * scale;
    const std::vector<PulseShape> shapes = {
        PulseShape::linear(2.0e9, -0.3),
        PulseShape::windowed(5.0, -3.5 * ns, 3.5 * ns),
        PulseShape::gaussian(1.3, 0.5 * ns, 2.0 * ns),
        PulseShape::sum({PulseShape::gaussian(-2.0, -1 * ns, 3 * ns), PulseShape::linear(1e8, 0.5),
                         PulseShape::windowed(0.7, -5 * ns, 5 * ns)}),
    };
    std::mt19937_64 rng(2024);
    for (const auto& shape : shapes) {
        const auto edges = breakpoints(shape);
        std::uniform_real_distribution<double> u(-8 * ns, 8 * ns);
        int checked = 0;
        while (checked < 100) {
            const double t = u(rng);
            bool near_edge = false;
            for (double e : edges) near_edge = near_edge || std::abs(t - e) < 4 * h;
            if (near_edge) continue;
            const double fd = (pulse_eval(shape, t + h) - pulse_eval(shape, t - h)) / (2 * h);
            const double an = pulse_derivative(shape, t);
            // Relative to the local derivative, or to the waveform's own rate scale
            // where the derivative passes through zero.
            const double denom = std::max(std::abs(an), std::abs(pulse_eval(shape, t)) / scale);
            if (denom == 0.0) {
                EXPECT_EQ(fd, 0.0);
            } else {
                EXPECT_LE(std::abs(fd - an) / denom, 1e-6) << "t = " << t;
            }
            ++checked;
        }
    }
}

TEST(pulses, scaled_matches_pointwise_product) {
    const auto s = PulseShape::sum({PulseShape::gaussian(2.0, 0.0, 1.0), PulseShape::linear(-3.0, 1.0),
                                    PulseShape::windowed(4.0, -1.0, 1.0)});
    const auto k = scaled(s, -2.5);
    for (double t : {-2.0, -0.5, 0.0, 0.25, 1.0, 3.0}) {
        EXPECT_NEAR(pulse_eval(k, t), -2.5 * pulse_eval(s, t), 1e-14);
        EXPECT_NEAR(pulse_derivative(k, t), -2.5 * pulse_derivative(s, t), 1e-14);
    }
}

TEST(pulses, breakpoints_and_support) {
    const auto s = PulseShape::sum({PulseShape::windowed(1.0, -2.0, 1.0), PulseShape::windowed(1.0, 0.0, 3.0)});
    EXPECT_EQ(breakpoints(s), (std::vector<double>{-2.0, 0.0, 1.0, 3.0}));
    double lo = 0.0;
    double hi = 0.0;
    ASSERT_TRUE(support_window(s, lo, hi));
    EXPECT_EQ(lo, -2.0);
    EXPECT_EQ(hi, 3.0);
    EXPECT_FALSE(support_window(PulseShape::gaussian(1.0, 0.0, 1.0), lo, hi));
}

TEST(schedule, invariants_checked) {
    const auto om = PulseShape::constant(1.0);
    const auto de = PulseShape::linear(1.0);
    EXPECT_NO_THROW(ScrapSchedule(om, de, 0.0, -10, 10, -3, 3));
    EXPECT_THROW(ScrapSchedule(om, de, -1.0, -10, 10, -3, 3), DomainError);
    EXPECT_THROW(ScrapSchedule(om, de, 0.0, -10, 10, 3, -3), DomainError);
    EXPECT_THROW(ScrapSchedule(om, de, 0.0, -10, 10, -11, 3), DomainError);
    EXPECT_THROW(ScrapSchedule(om, de, 0.0, -10, 10, -3, 10), DomainError);
}

TEST(schedule, counterintuitive_pair) {
    const double alpha = -2e21;
    const double om0 = 1.6e11;
    const auto s = make_counterintuitive_pair(alpha, om0, -3.5 * ns, 3.5 * ns);
    EXPECT_EQ(pulse_eval(s.detuning(), 0.0), 0.0);
    EXPECT_EQ(pulse_eval(s.rabi(), 0.0), om0);
    EXPECT_EQ(pulse_eval(s.rabi(), std::nextafter(3.5 * ns, 1.0)), 0.0);
    EXPECT_EQ(pulse_eval(s.rabi(), 3.5 * ns + 1e-15), 0.0);
    EXPECT_EQ(s.t_b(), -3.5 * ns);
    EXPECT_EQ(s.t_m(), 3.5 * ns);
    EXPECT_NEAR(s.t_start(), -10 * ns, 1e-20);
    EXPECT_NEAR(s.t_end(), 10 * ns, 1e-20);
    EXPECT_EQ(s.breakpoints(), (std::vector<double>{-3.5 * ns, 3.5 * ns}));

    // Off-centre window: the crossing stays inside it.
    const auto off = make_counterintuitive_pair(-1.0, 1.0, 2.0, 6.0, 0.0, 10.0);
    EXPECT_EQ(pulse_eval(off.detuning(), 4.0), 0.0);
    EXPECT_GT(pulse_eval(off.detuning(), 2.0), 0.0);
    EXPECT_LT(pulse_eval(off.detuning(), 6.0), 0.0);

    EXPECT_THROW(make_counterintuitive_pair(-1.0, 1.0, 3.0, 3.0), DomainError);
    EXPECT_THROW(make_counterintuitive_pair(-1.0, 1.0, 4.0, 3.0), DomainError);
    EXPECT_THROW(make_counterintuitive_pair(-1.0, 0.0, -1.0, 1.0), DomainError);
}
