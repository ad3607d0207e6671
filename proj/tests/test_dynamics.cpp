#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <wilberforce/dynamics.hpp>

using namespace wilberforce;

TEST(Hamiltonian, HandEvaluatedValues) {
    EXPECT_DOUBLE_EQ(hamiltonian(resonant_defaults(), {0, 0, 0, 0}), 0.0);
    EXPECT_DOUBLE_EQ(hamiltonian(resonant_defaults(), {1, 1, 1, 1}), 3.5);
    EXPECT_DOUBLE_EQ(hamiltonian(resonant_defaults(0.5), {1, 1, 1, 1}), 4.0);
}

TEST(Hamiltonian, UnperturbedPart) {
    EXPECT_DOUBLE_EQ(h0(resonant_defaults(), {1, 0, 0, 0}), 0.5);
    EXPECT_DOUBLE_EQ(h0(resonant_defaults(0.7), {1, 1, 1, 1}), 3.5);
}

TEST(VectorField, Examples) {
    EXPECT_EQ(vector_field(resonant_defaults(0.3), {0, 0, 0, 0}), (PhaseState{0, 0, 0, 0}));
    EXPECT_EQ(vector_field(resonant_defaults(), {1, 0, 1, 0}), (PhaseState{0, -1, 0, -4}));
    EXPECT_EQ(vector_field(resonant_defaults(0.5), {1, 0, 1, 0}), (PhaseState{0, -2, 0, -5}));
}

// The field must be the symplectic gradient of H: compare to central differences.
TEST(VectorField, MatchesFiniteDifferenceGradient) {
    const auto params = resonant_defaults(0.37);
    const PhaseState s{0.3, -1.2, 0.8, 0.45};
    const double d = 1e-6;
    auto dH = [&](int i) {
        auto a = s.to_array(), b = s.to_array();
        a[i] += d;
        b[i] -= d;
        return (hamiltonian(params, PhaseState::from_array(a)) - hamiltonian(params, PhaseState::from_array(b))) /
               (2 * d);
    };
    const auto f = vector_field(params, s);
    EXPECT_NEAR(f.q1, dH(1), 1e-8);
    EXPECT_NEAR(f.p1, -dH(0), 1e-8);
    EXPECT_NEAR(f.q2, dH(3), 1e-8);
    EXPECT_NEAR(f.p2, -dH(2), 1e-8);
}

TEST(H0Flow, PeriodAndQuarterTurns) {
    const PhaseState s{0.3, -0.7, 1.1, 0.25};
    const auto back = h0_flow(1, 2, s, 2 * std::numbers::pi);
    EXPECT_LT(distance(back, s), 1e-14);
    const auto a = h0_flow(1, 2, {1, 0, 0, 0}, std::numbers::pi / 2);
    EXPECT_NEAR(a.q1, 0, 1e-15);
    EXPECT_NEAR(a.p1, -1, 1e-15);
    const auto b = h0_flow(1, 2, {0, 0, 1, 0}, std::numbers::pi / 2);
    EXPECT_NEAR(b.q2, -1, 1e-15);
    EXPECT_NEAR(b.p2, 0, 1e-15);
    EXPECT_THROW(h0_flow(0, 2, s, 1.0), InvalidArgument);
}

TEST(H0Flow, ConservesUnperturbedEnergy) {
    const auto params = resonant_defaults();
    const PhaseState s{0.9, 0.2, -0.4, 1.3};
    for (double t : {0.1, 1.7, 12.5})
        EXPECT_NEAR(h0(params, h0_flow(1, 2, s, t)), h0(params, s), 1e-13);
}

TEST(SystemParams, Validation) {
    EXPECT_NO_THROW(resonant_defaults(0.4).validate());
    EXPECT_THROW(resonant_defaults(-0.1).validate(), InvalidArgument);
    auto p = resonant_defaults();
    p.m = 0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    EXPECT_TRUE(resonant_defaults().is_resonant_1_2());
    EXPECT_DOUBLE_EQ(resonant_defaults().torsion(), 4.0);
}
