#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <wilberforce/integrators.hpp>
#include <wilberforce/orbits.hpp>

using namespace wilberforce;
constexpr double two_pi = 2 * std::numbers::pi;

TEST(Restricted, UncoupledRotation) {
    const auto r = restricted_flow(1.0, 0.0, {0, 1, 1.0, 0}, two_pi);
    EXPECT_NEAR(r.p1, 0, 1e-9);
    EXPECT_NEAR(r.q1, 1, 1e-9);
    EXPECT_NEAR(std::remainder(r.theta, two_pi), 0, 1e-9);
    const auto s = restricted_flow(1.0, 0.0, {0.3, -0.8, 1.0, 0.2}, 3.7);
    EXPECT_NEAR(s.p1 * s.p1 + s.q1 * s.q1, 0.73, 1e-10);
}

TEST(Restricted, NormalModeTurnsAtTwice) {
    const auto r = restricted_flow(1.0, 0.4, {0, 0, 1.0, 0}, 1.3);
    EXPECT_NEAR(std::remainder(r.theta - 2.6, two_pi), 0, 1e-10);
}

// lift() must land on the energy shell of the full system at q1 = p1 = 0.
// The chart puts energy 2L into the second oscillator.
TEST(Restricted, LiftEnergy) {
    const auto s = lift({0, 0, 2.0, 0.7});
    EXPECT_NEAR(hamiltonian(resonant_defaults(0.3), s), 4.0, 1e-14);
    EXPECT_THROW(lift({0, 0, 0.0, 0}), InvalidArgument);
}

TEST(ReturnMap, Examples) {
    const auto a = return_map(1.0, 0.0, 0.3, 1.2);
    EXPECT_NEAR(a.p1, 0.3, 1e-9);
    EXPECT_NEAR(a.q1, 1.2, 1e-9);
    EXPECT_NEAR(a.time, two_pi, 1e-9);
    const auto b = return_map(1.0, 0.5, 0.0, 0.0);
    EXPECT_EQ(b.p1, 0.0);
    EXPECT_EQ(b.q1, 0.0);
    EXPECT_NEAR(b.time, two_pi, 1e-10);
}

TEST(ReturnMap, FormulaValues) {
    EXPECT_DOUBLE_EQ(return_time_formula(0, 0.3), two_pi);
    EXPECT_NEAR(return_time_formula(1, 0.1), 6.126105674500097, 1e-15);
    EXPECT_NEAR(return_time_formula(2, 0.1), two_pi - 0.2 * std::numbers::pi, 1e-15);
}

// Measured first-order coefficient of the return time at h = 1, q1 = 1. It is
// pi/4, half the coefficient in return_time_formula (recorded as a known gap).
TEST(ReturnMap, MeasuredFirstOrderCoefficient) {
    for (double eps : {0.01, 0.02}) {
        const auto r = return_map(1.0, eps, 0.0, 1.0);
        EXPECT_NEAR(r.time, two_pi - eps * std::numbers::pi / 4, eps * eps);
    }
}

TEST(FixedPoint, IdentityAtZeroCoupling) {
    const auto fp = find_fixed_point(1.0, 0.0, 0.0, 2.0);
    EXPECT_NEAR(fp.p1, 0.0, 1e-9);
    EXPECT_NEAR(fp.q1, 2.0, 1e-9);
    EXPECT_NEAR(fp.period, two_pi, 1e-9);
}

TEST(FixedPoint, DisplacementScalesWithCoupling) {
    std::vector<double> c;
    for (double eps : {0.005, 0.01, 0.02}) {
        const auto fp = find_fixed_point(1.0, eps, 0.0, 2.0);
        EXPECT_LT(fp.residual, 1e-9);
        c.push_back(std::hypot(fp.p1, fp.q1 - 2.0) / eps);
    }
    for (double v : c)
        EXPECT_LE(v, 10.0);
    EXPECT_GE(c[1] / c[0], 0.5);
    EXPECT_LE(c[1] / c[0], 2.0);
}

// The return map is the restricted flow sampled at theta = 0; check against direct integration.
TEST(FixedPoint, ReturnMapAgreesWithTimeIntegration) {
    const double eps = 0.05;
    const auto r = return_map(1.0, eps, 0.1, 1.5);
    const auto s = restricted_flow(1.0, eps, {0.1, 1.5, 1.0, 0}, r.time, 1e-4);
    EXPECT_NEAR(s.p1, r.p1, 1e-7);
    EXPECT_NEAR(s.q1, r.q1, 1e-7);
    EXPECT_NEAR(std::remainder(s.theta, two_pi), 0.0, 1e-7);
}

TEST(Monodromy, UncoupledIsIdentityOverCommonPeriod) {
    const auto m = monodromy(resonant_defaults(), PhaseState{1, 0, 0.5, 0}, two_pi);
    EXPECT_LT((m.matrix - Matrix4::Identity()).norm(), 1e-8);
    EXPECT_NEAR(m.determinant, 1.0, 1e-10);
}

TEST(Monodromy, SymplecticAndUnitDeterminant) {
    const auto m = monodromy(resonant_defaults(0.3), PhaseState{0.4, 0.2, 0.5, -0.3}, 3.0);
    EXPECT_NEAR(m.determinant, 1.0, 1e-8);
    EXPECT_LT(m.symplectic_defect, 1e-8);
}

// Finite-difference oracle for the variational equations.
TEST(Monodromy, MatchesFiniteDifferences) {
    const auto params = resonant_defaults(0.3);
    const PhaseState s0{0.4, 0.2, 0.5, -0.3};
    const double T = 2.0, d = 1e-6;
    const auto m = monodromy(params, s0, T);
    for (int j = 0; j < 4; ++j) {
        auto a = s0.to_array(), b = s0.to_array();
        a[j] += d;
        b[j] -= d;
        const auto fa = advance(params, PhaseState::from_array(a), T, 1e-3, Method::reference).to_array();
        const auto fb = advance(params, PhaseState::from_array(b), T, 1e-3, Method::reference).to_array();
        for (int i = 0; i < 4; ++i)
            EXPECT_NEAR(m.matrix(i, j), (fa[i] - fb[i]) / (2 * d), 1e-6);
    }
}

TEST(Classify, Cases) {
    using C = std::complex<double>;
    EXPECT_EQ(classify({C(1, 0), C(1, 0), C(std::cos(0.3), std::sin(0.3)), C(std::cos(0.3), -std::sin(0.3))}),
              Stability::elliptic);
    EXPECT_EQ(classify({C(1, 0), C(1, 0), C(2, 0), C(0.5, 0)}), Stability::hyperbolic);
}

TEST(Shooting, NormalModeOrbits) {
    const auto params = resonant_defaults(0.1);
    const auto two = shoot_periodic(params, {0, 0, 1, 0}, std::numbers::pi);
    EXPECT_LT(two.closure_residual, 1e-9);
    EXPECT_NEAR(two.period, std::numbers::pi, 1e-8);
    EXPECT_EQ(two.stability, Stability::elliptic);
    const auto one = shoot_periodic(params, {1, 0, 0, 0}, two_pi);
    EXPECT_LT(one.closure_residual, 1e-9);
    EXPECT_NEAR(one.period, two_pi, 1e-8);
    EXPECT_NEAR(one.energy, 0.5, 1e-12);
}

TEST(Shooting, UncoupledIsDegenerate) {
    EXPECT_THROW(shoot_periodic(resonant_defaults(0.0), {0, 0, 1, 0}, std::numbers::pi), DegenerateJacobian);
    EXPECT_THROW(shoot_periodic(resonant_defaults(0.0), {0.3, 0.2, 0.5, 0.1}, two_pi), DegenerateJacobian);
}

TEST(Shooting, SectionChoiceAvoidsTangentPlane) {
    // the q1 mode lives in p2 = 0, so p2 cannot be the section
    EXPECT_NE(choose_section(resonant_defaults(), {std::sqrt(2.0), 0, 0, 0}), 3);
}

TEST(Shooting, FromRestrictedFixedPoint) {
    const double eps = 0.02;
    const auto fp = find_fixed_point(1.0, eps, 0.0, 2.0);
    const auto o = shoot_periodic(resonant_defaults(eps), fp.lifted, fp.period);
    EXPECT_LT(o.closure_residual, 1e-8);
    EXPECT_NEAR(o.period, fp.period, 1e-3);
}

TEST(SweepCsv, Deterministic) {
    const auto o = shoot_periodic(resonant_defaults(0.05), {0, 0, 1, 0}, std::numbers::pi);
    std::ostringstream a, b;
    write_orbit_sweep_csv(a, {{0.05, o}});
    write_orbit_sweep_csv(b, {{0.05, o}});
    EXPECT_EQ(a.str(), b.str());
    EXPECT_FALSE(to_json(o).empty());
}
