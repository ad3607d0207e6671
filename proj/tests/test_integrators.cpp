#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <wilberforce/integrators.hpp>
#include <wilberforce/io.hpp>

using namespace wilberforce;

TEST(Verlet, HandExecutedStep) {
    const auto s = verlet_step(resonant_defaults(), {1, 0, 1, 0}, 0.1);
    EXPECT_NEAR(s.q1, 0.995, 1e-15);
    EXPECT_NEAR(s.p1, -0.09975, 1e-15);
    EXPECT_NEAR(s.q2, 0.98, 1e-15);
    EXPECT_NEAR(s.p2, -0.396, 1e-15);
}

TEST(Verlet, EquilibriumAndDecoupledMode) {
    EXPECT_EQ(verlet_step(resonant_defaults(0.5), {}, 0.3), PhaseState{});
    PhaseState s{1, 0, 0, 0};
    for (int i = 0; i < 1000; ++i)
        s = verlet_step(resonant_defaults(), s, 1e-2);
    EXPECT_EQ(s.q2, 0.0);
    EXPECT_EQ(s.p2, 0.0);
}

TEST(Integrate, ReturnsAfterOnePeriod) {
    const auto traj = integrate(resonant_defaults(), {1, 0, 0, 0}, {1e-3, Method::verlet, 2 * std::numbers::pi, 1});
    EXPECT_LT(distance(traj.back(), {1, 0, 0, 0}), 1e-5);
    EXPECT_NEAR(traj.times.back(), 2 * std::numbers::pi, 1e-12);
}

TEST(Integrate, EnergyDriftBoundedAndSecondOrder) {
    const auto params = resonant_defaults(0.4);
    const auto a = integrate(params, {1, 1, 1, 1}, {1e-2, Method::verlet, 100, 1});
    const auto b = integrate(params, {1, 1, 1, 1}, {5e-3, Method::verlet, 100, 1});
    const double ratio = energy_drift(a) / energy_drift(b);
    EXPECT_GE(ratio, 3.0);
    EXPECT_LE(ratio, 5.0);
    EXPECT_LT(energy_drift(integrate(params, {1, 1, 1, 1}, {1e-3, Method::verlet, 100, 10})), 1e-5);
}

TEST(Reference, ExactSolutionAndVerletAgreement) {
    const auto s = advance(resonant_defaults(), {1, 0, 0, 0}, 1.0, 1e-3, Method::reference);
    EXPECT_NEAR(s.q1, std::cos(1.0), 1e-10);
    const auto params = resonant_defaults(0.5);
    const auto r = advance(params, {1, 1, 1, 1}, 1.0, 1e-3, Method::reference);
    const auto v = advance(params, {1, 1, 1, 1}, 1.0, 1e-3, Method::verlet);
    EXPECT_LT(distance(r, v), 1e-4);
    EXPECT_EQ(reference_step(params, {}, 0.1), PhaseState{});
}

// The reference integrator drifts steadily; the symplectic one does not.
TEST(EnergyDrift, ReferenceGrowsVerletStaysBounded) {
    const auto params = resonant_defaults(0.5);
    const double k = 0.05;
    const auto ref_short = integrate(params, {1, 1, 1, 1}, {k, Method::reference, 200, 1});
    const auto ref_long = integrate(params, {1, 1, 1, 1}, {k, Method::reference, 2000, 1});
    const auto ver_short = integrate(params, {1, 1, 1, 1}, {k, Method::verlet, 200, 1});
    const auto ver_long = integrate(params, {1, 1, 1, 1}, {k, Method::verlet, 2000, 1});
    EXPECT_GT(energy_drift(ref_long), 5.0 * energy_drift(ref_short));
    EXPECT_LT(energy_drift(ver_long), 2.0 * energy_drift(ver_short));
}

TEST(EnergyDrift, SingleSampleIsZero) {
    Trajectory t;
    t.params = resonant_defaults();
    t.times = {0.0};
    t.states = {{0.1, 0, 0, 0}};
    EXPECT_EQ(energy_drift(t), 0.0);
}

TEST(Integrate, RejectsBadStep) {
    EXPECT_THROW(integrate(resonant_defaults(), {1, 0, 0, 0}, {0.0, Method::verlet, 1.0, 1}), InvalidArgument);
}

TEST(Integrate, CsvIsDeterministicAndReadable) {
    const auto traj = integrate(resonant_defaults(0.2), {1, 1, 1, 1}, {1e-2, Method::verlet, 1, 10});
    std::ostringstream a, b;
    write_trajectory_csv(a, traj);
    write_trajectory_csv(b, integrate(resonant_defaults(0.2), {1, 1, 1, 1}, {1e-2, Method::verlet, 1, 10}));
    EXPECT_EQ(a.str(), b.str());
    EXPECT_NE(a.str().find("q1"), std::string::npos);
}
