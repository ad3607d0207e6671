#pragma once

// Phase space, parameters and Hamiltonian of the quartic-coupled
// two-mode oscillator
//
//   H = 1/2 (p1^2 + m w1^2 q1^2 + p2^2 + I w2^2 q2^2) + eps q1^2 q2^2
//
// q1 is the elongation of the spring, q2 the torsion angle.

#include <array>
#include <cmath>
#include <ostream>

#include "errors.hpp"

namespace wilberforce {

struct SystemParams {
    double m = 1.0;
    double I = 1.0;
    double omega1 = 1.0;
    double omega2 = 2.0;
    double epsilon = 0.0;

    /// Elastic constant kappa = m w1^2.
    constexpr double kappa() const noexcept { return m * omega1 * omega1; }
    /// Torsional constant rho = I w2^2.
    constexpr double torsion() const noexcept { return I * omega2 * omega2; }

    constexpr bool is_resonant_1_2() const noexcept { return omega1 == 1.0 && omega2 == 2.0; }

    void validate() const {
        if (!(m > 0.0) || !(I > 0.0))
            throw InvalidArgument("mass and moment of inertia must be positive");
        if (!(omega1 > 0.0) || !(omega2 > 0.0))
            throw InvalidArgument("frequencies must be positive");
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
            throw InvalidArgument("coupling epsilon must be finite and nonnegative");
    }

    constexpr SystemParams with_epsilon(double eps) const noexcept {
        SystemParams p = *this;
        p.epsilon = eps;
        return p;
    }
};

/// m = I = w1 = 1, w2 = 2: the 1:2 resonant configuration used throughout.
constexpr SystemParams resonant_defaults(double epsilon = 0.0) noexcept {
    return SystemParams{1.0, 1.0, 1.0, 2.0, epsilon};
}

struct PhaseState {
    double q1 = 0.0;
    double p1 = 0.0;
    double q2 = 0.0;
    double p2 = 0.0;

    constexpr std::array<double, 4> to_array() const noexcept { return {q1, p1, q2, p2}; }
    static constexpr PhaseState from_array(const std::array<double, 4>& a) noexcept {
        return {a[0], a[1], a[2], a[3]};
    }

    bool is_finite() const noexcept {
        return std::isfinite(q1) && std::isfinite(p1) && std::isfinite(q2) && std::isfinite(p2);
    }

    constexpr PhaseState& operator+=(const PhaseState& o) noexcept {
        q1 += o.q1; p1 += o.p1; q2 += o.q2; p2 += o.p2;
        return *this;
    }
    constexpr PhaseState& operator-=(const PhaseState& o) noexcept {
        q1 -= o.q1; p1 -= o.p1; q2 -= o.q2; p2 -= o.p2;
        return *this;
    }
    constexpr PhaseState& operator*=(double s) noexcept {
        q1 *= s; p1 *= s; q2 *= s; p2 *= s;
        return *this;
    }

    friend constexpr PhaseState operator+(PhaseState a, const PhaseState& b) noexcept { return a += b; }
    friend constexpr PhaseState operator-(PhaseState a, const PhaseState& b) noexcept { return a -= b; }
    friend constexpr PhaseState operator*(double s, PhaseState a) noexcept { return a *= s; }
    friend constexpr PhaseState operator*(PhaseState a, double s) noexcept { return a *= s; }
    friend constexpr bool operator==(const PhaseState&, const PhaseState&) = default;

    friend std::ostream& operator<<(std::ostream& os, const PhaseState& s) {
        return os << '(' << s.q1 << ", " << s.p1 << ", " << s.q2 << ", " << s.p2 << ')';
    }
};

inline double norm(const PhaseState& s) noexcept {
    return std::sqrt(s.q1 * s.q1 + s.p1 * s.p1 + s.q2 * s.q2 + s.p2 * s.p2);
}

inline double distance(const PhaseState& a, const PhaseState& b) noexcept { return norm(a - b); }

/// Value of H on an energy shell; h >= 0.
struct EnergyLevel {
    double h = 0.0;

    explicit EnergyLevel(double value) : h(value) {
        if (!(value >= 0.0))
            throw InvalidArgument("energy level must be nonnegative");
    }
};

inline double hamiltonian(const SystemParams& params, const PhaseState& s) noexcept {
    return 0.5 * (s.p1 * s.p1 + params.kappa() * s.q1 * s.q1 + s.p2 * s.p2 + params.torsion() * s.q2 * s.q2)
           + params.epsilon * s.q1 * s.q1 * s.q2 * s.q2;
}

/// Unperturbed part 1/2 (p1^2 + w1^2 q1^2 + p2^2 + w2^2 q2^2), with m = I = 1.
inline double h0(const SystemParams& params, const PhaseState& s) noexcept {
    const double w1 = params.omega1;
    const double w2 = params.omega2;
    return 0.5 * (s.p1 * s.p1 + w1 * w1 * s.q1 * s.q1 + s.p2 * s.p2 + w2 * w2 * s.q2 * s.q2);
}

/// Generalised forces F1 = -dH/dq1 and F2 = -dH/dq2.
inline double force1(const SystemParams& params, double q1, double q2) noexcept {
    return -params.kappa() * q1 - 2.0 * params.epsilon * q1 * q2 * q2;
}

inline double force2(const SystemParams& params, double q1, double q2) noexcept {
    return -params.torsion() * q2 - 2.0 * params.epsilon * q2 * q1 * q1;
}

/// Hamilton's equations (q1', p1', q2', p2').
inline PhaseState vector_field(const SystemParams& params, const PhaseState& s) noexcept {
    return {s.p1, force1(params, s.q1, s.q2), s.p2, force2(params, s.q1, s.q2)};
}

/// Exact flow of the unperturbed Hamiltonian H0 at time t.
inline PhaseState h0_flow(double omega1, double omega2, const PhaseState& s, double t) {
    if (!(omega1 > 0.0) || !(omega2 > 0.0))
        throw InvalidArgument("h0_flow: frequencies must be positive");
    const double c1 = std::cos(omega1 * t);
    const double s1 = std::sin(omega1 * t);
    const double c2 = std::cos(omega2 * t);
    const double s2 = std::sin(omega2 * t);
    return {
        s.q1 * c1 + s.p1 / omega1 * s1,
        -omega1 * s.q1 * s1 + s.p1 * c1,
        s.q2 * c2 + s.p2 / omega2 * s2,
        -omega2 * s.q2 * s2 + s.p2 * c2,
    };
}

} // namespace wilberforce
