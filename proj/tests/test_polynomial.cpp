#include <gtest/gtest.h>

#include <wilberforce/polynomial.hpp>
#include <wilberforce/symbolic.hpp>

using namespace wilberforce::sym;

namespace {
PhasePoly x(std::size_t i) { return PhasePoly::variable(i); }
} // namespace

TEST(Polynomial, ArithmeticCancelsExactly) {
    const PhasePoly a = x(0) * x(0) + Rational(1) / 3 * x(1);
    const PhasePoly b = a - a;
    EXPECT_TRUE(b.is_zero());
    EXPECT_EQ((a + a), a * Rational(2));
    EXPECT_EQ((x(0) + x(1)).pow(2), x(0) * x(0) + Rational(2) * x(0) * x(1) + x(1) * x(1));
    EXPECT_EQ(a.degree(), 2);
    EXPECT_EQ(a.degree_in(1), 1);
}

TEST(Polynomial, NegativeDenominatorsNormalize) {
    const Rational r = Rational(-3) / 6;
    EXPECT_EQ(to_string(r), "-1/2");
    EXPECT_EQ(to_string(Rational(4) / -8), "-1/2");
}

TEST(Polynomial, Derivative) {
    const PhasePoly p = x(0).pow(3) * x(2) + Rational(5) * x(1);
    EXPECT_EQ(p.derivative(0), Rational(3) * x(0).pow(2) * x(2));
    EXPECT_EQ(p.derivative(1), PhasePoly::constant(Rational(5)));
    EXPECT_TRUE(p.derivative(3).is_zero());
}

TEST(Polynomial, HomogeneousPart) {
    const PhasePoly p = x(0) + x(1) * x(2) + PhasePoly::constant(Rational(7));
    EXPECT_EQ(p.homogeneous_part(2), x(1) * x(2));
    EXPECT_EQ(p.homogeneous_part(0), PhasePoly::constant(Rational(7)));
}

TEST(Polynomial, SubstituteIntoOtherVariables) {
    const HopfPoly r1 = HopfPoly::variable(0);
    const std::array<PhasePoly, num_vars> values{x(0) * x(0), x(1), x(2), x(3)};
    EXPECT_EQ((r1 * r1).substitute<PhaseVars>(values), x(0).pow(4));
}

TEST(Polynomial, ToStringIsDeterministic) {
    const HopfPoly p = Rational(1) / 16 * HopfPoly::variable(0) * HopfPoly::variable(1);
    EXPECT_EQ(to_string(p), "1/16*rho1*rho2");
    EXPECT_EQ(to_string(HopfPoly{}), "0");
}

TEST(Polynomial, JsonRoundTrip) {
    const PhasePoly p = Rational(-5) / 768 * x(0) * x(1).pow(2) + Rational(3) * x(3);
    const auto j = to_json(p);
    EXPECT_EQ(from_json<PhaseVars>(j), p);
    EXPECT_THROW(from_json<HopfVars>(j), wilberforce::InvalidArgument);
}

TEST(Polynomial, NumericEvaluationMatchesExact) {
    const PhasePoly p = Rational(1) / 4 * x(0) * x(0) * x(2) - Rational(2) * x(1) * x(3);
    const NumericPolynomial np(p);
    EXPECT_DOUBLE_EQ(np({2.0, 1.0, 3.0, -1.0}), 0.25 * 4 * 3 + 2.0);
}

TEST(Polynomial, ComplexParts) {
    const ComplexPhasePoly c = complexify(x(0)) * Gaussian(Rational(1), Rational(2));
    EXPECT_EQ(real_part(c), x(0));
    EXPECT_EQ(imag_part(c), x(0) * Rational(2));
}
