#pragma once

// Periodic orbits of the full system (section shooting, monodromy, Floquet
// multipliers) and the restricted system near the normal mode q1 = p1 = 0 in
// the chart Psi(p1, q1, L, theta) = (p1, q1, p2 = -2 sqrt(L) sin theta, q2 = sqrt(L) cos theta).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dynamics.hpp"
#include "errors.hpp"
#include "integrators.hpp"
#include "io.hpp"

namespace wilberforce {

enum class Stability { elliptic, hyperbolic, degenerate };

inline std::string to_string(Stability s) {
    switch (s) {
    case Stability::elliptic: return "elliptic";
    case Stability::hyperbolic: return "hyperbolic";
    default: return "degenerate";
    }
}

using Matrix4 = Eigen::Matrix4d;
using Multipliers = std::array<std::complex<double>, 4>;

struct OrbitResult {
    PhaseState initial_state;
    double period = 0.0;
    double closure_residual = 0.0;
    Multipliers floquet_multipliers{};
    Stability stability = Stability::degenerate;
    int iterations = 0;
    double energy = 0.0;
};

struct RestrictedState {
    double p1 = 0.0;
    double q1 = 0.0;
    double L = 1.0;
    double theta = 0.0;
};

/// Psi(p1, q1, L, theta) as a state of the full system.
inline PhaseState lift(const RestrictedState& r) {
    if (!(r.L > 0.0))
        throw InvalidArgument("lift: L must be positive");
    return {r.q1, r.p1, std::sqrt(r.L) * std::cos(r.theta), -2.0 * std::sqrt(r.L) * std::sin(r.theta)};
}

namespace detail {

struct Restricted3 {
    double p1, q1, theta;

    friend Restricted3 operator+(const Restricted3& a, const Restricted3& b) {
        return {a.p1 + b.p1, a.q1 + b.q1, a.theta + b.theta};
    }
    friend Restricted3 operator*(double s, const Restricted3& a) { return {s * a.p1, s * a.q1, s * a.theta}; }
};

// (p1, q1, elapsed time) as functions of theta.
struct ThetaParametrized {
    double p1, q1, t;

    friend ThetaParametrized operator+(const ThetaParametrized& a, const ThetaParametrized& b) {
        return {a.p1 + b.p1, a.q1 + b.q1, a.t + b.t};
    }
    friend ThetaParametrized operator*(double s, const ThetaParametrized& a) { return {s * a.p1, s * a.q1, s * a.t}; }
};

inline double wrap_angle(double theta) {
    const double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    return t < 0.0 ? t + two_pi : t;
}

} // namespace detail

/// Restricted equations with L frozen at h:
///   theta' = 2 + eps q1^2 cos^2 theta, p1' = -q1 - 2 eps h q1 cos^2 theta, q1' = p1.
inline RestrictedState restricted_flow(double h, double epsilon, const RestrictedState& r0, double t,
                                       double k = 1e-3) {
    if (!(h > 0.0) || !(epsilon >= 0.0))
        throw InvalidArgument("restricted_flow: need h > 0 and epsilon >= 0");
    auto field = [&](const detail::Restricted3& s) -> detail::Restricted3 {
        const double c = std::cos(s.theta);
        return {-s.q1 - 2.0 * epsilon * h * s.q1 * c * c, s.p1, 2.0 + epsilon * s.q1 * s.q1 * c * c};
    };
    const std::size_t n = step_count(std::abs(t), k);
    const double dt = t / static_cast<double>(n);
    detail::Restricted3 s{r0.p1, r0.q1, r0.theta};
    for (std::size_t i = 0; i < n; ++i) {
        s = rk4_step(field, s, dt);
        if (!std::isfinite(s.p1) || !std::isfinite(s.q1) || !std::isfinite(s.theta))
            throw Divergence(i + 1, static_cast<double>(i + 1) * dt);
    }
    return {s.p1, s.q1, h, detail::wrap_angle(s.theta)};
}

struct ReturnMapResult {
    double p1 = 0.0;
    double q1 = 0.0;
    double time = 0.0;
};

/// First return to theta = 0 after theta advanced by 2 pi * wraps. theta is
/// the independent variable (theta' >= 2), so the section is hit exactly.
inline ReturnMapResult return_map(double h, double epsilon, double p1_0, double q1_0, int wraps = 2,
                                  int steps_per_wrap = 10000) {
    if (!(h > 0.0) || !(epsilon >= 0.0) || wraps < 1 || steps_per_wrap < 1)
        throw InvalidArgument("return_map: invalid arguments");
    using S = detail::ThetaParametrized;
    double theta = 0.0;
    const int n = wraps * steps_per_wrap;
    const double dtheta = 2.0 * std::numbers::pi * wraps / n;
    S s{p1_0, q1_0, 0.0};
    for (int i = 0; i < n; ++i) {
        // non-autonomous in theta: carry theta through the stages by hand
        auto f = [&](double th, const S& x) -> S {
            const double c = std::cos(th);
            const double rate = 2.0 + epsilon * x.q1 * x.q1 * c * c;
            return {(-x.q1 - 2.0 * epsilon * h * x.q1 * c * c) / rate, x.p1 / rate, 1.0 / rate};
        };
        const S k1 = f(theta, s);
        const S k2 = f(theta + 0.5 * dtheta, s + (0.5 * dtheta) * k1);
        const S k3 = f(theta + 0.5 * dtheta, s + (0.5 * dtheta) * k2);
        const S k4 = f(theta + dtheta, s + dtheta * k3);
        s = s + (dtheta / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        theta = dtheta * (i + 1);
        if (!std::isfinite(s.p1) || !std::isfinite(s.q1))
            throw Divergence(static_cast<std::size_t>(i + 1), s.t);
    }
    return {s.p1, s.q1, s.t};
}

/// First-order return time 2 pi - eps (pi / 2) q1_0^2.
inline double return_time_formula(double q1_0, double epsilon) {
    return 2.0 * std::numbers::pi - epsilon * (std::numbers::pi / 2.0) * q1_0 * q1_0;
}

struct FixedPointResult {
    double p1 = 0.0;
    double q1 = 0.0;
    double period = 0.0;
    double residual = 0.0;
    int iterations = 0;
    /// Psi(p1, q1, L = h, theta = 0).
    PhaseState lifted;
};

/// Newton iteration on G(p1, q1) = return_map(p1, q1) - (p1, q1) with a
/// central-difference Jacobian.
inline FixedPointResult find_fixed_point(double h, double epsilon, double p1_seed, double q1_seed,
                                         int max_iterations = 30, double tol = 1e-10, double fd_step = 1e-6) {
    if (!(h > 0.0) || !(epsilon >= 0.0))
        throw InvalidArgument("find_fixed_point: need h > 0 and epsilon >= 0");
    auto G = [&](const Eigen::Vector2d& x) {
        const auto r = return_map(h, epsilon, x[0], x[1]);
        return Eigen::Vector2d(r.p1 - x[0], r.q1 - x[1]);
    };
    Eigen::Vector2d x(p1_seed, q1_seed);
    Eigen::Vector2d g = G(x);
    int it = 0;
    while (g.norm() >= tol) {
        if (it >= max_iterations)
            throw NoConvergence("find_fixed_point: no convergence after " + std::to_string(max_iterations) +
                                " iterations (|G| = " + format_double(g.norm()) + ")");
        Eigen::Matrix2d J;
        for (int c = 0; c < 2; ++c) {
            Eigen::Vector2d e = Eigen::Vector2d::Zero();
            e[c] = fd_step;
            J.col(c) = (G(x + e) - G(x - e)) / (2.0 * fd_step);
        }
        Eigen::FullPivLU<Eigen::Matrix2d> lu(J);
        if (!lu.isInvertible())
            throw DegenerateJacobian("find_fixed_point: singular Jacobian of the return map");
        x -= lu.solve(g);
        g = G(x);
        ++it;
    }
    FixedPointResult res;
    res.p1 = x[0];
    res.q1 = x[1];
    res.period = return_map(h, epsilon, x[0], x[1]).time;
    res.residual = g.norm();
    res.iterations = it;
    res.lifted = lift({x[0], x[1], h, 0.0});
    return res;
}

/// Jacobian of the vector field at s, ordering (q1, p1, q2, p2).
inline Matrix4 field_jacobian(const SystemParams& params, const PhaseState& s) {
    const double e = params.epsilon;
    Matrix4 A = Matrix4::Zero();
    A(0, 1) = 1.0;
    A(2, 3) = 1.0;
    A(1, 0) = -params.kappa() - 2.0 * e * s.q2 * s.q2;
    A(1, 2) = -4.0 * e * s.q1 * s.q2;
    A(3, 0) = -4.0 * e * s.q1 * s.q2;
    A(3, 2) = -params.torsion() - 2.0 * e * s.q1 * s.q1;
    return A;
}

namespace detail {

struct Variational {
    PhaseState s;
    Matrix4 M;

    friend Variational operator+(const Variational& a, const Variational& b) { return {a.s + b.s, a.M + b.M}; }
    friend Variational operator*(double c, const Variational& a) { return {c * a.s, c * a.M}; }
};

} // namespace detail

inline Matrix4 symplectic_form() {
    Matrix4 J = Matrix4::Zero();
    J(0, 1) = 1.0;
    J(1, 0) = -1.0;
    J(2, 3) = 1.0;
    J(3, 2) = -1.0;
    return J;
}

struct MonodromyResult {
    Matrix4 matrix = Matrix4::Identity();
    Multipliers multipliers{};
    double determinant = 1.0;
    double symplectic_defect = 0.0; // max |M^T J M - J|
    Stability stability = Stability::degenerate;
};

/// Stability from multipliers: elliptic if all lie on the unit circle to
/// 1e-5 and the nontrivial pair is non-real or distinct; hyperbolic if one
/// lies outside; degenerate otherwise.
inline Stability classify(const Multipliers& mu, double tol = 1e-5) {
    for (const auto& m : mu)
        if (std::abs(m) > 1.0 + tol)
            return Stability::hyperbolic;
    for (const auto& m : mu)
        if (std::abs(std::abs(m) - 1.0) > tol)
            return Stability::degenerate;
    // the two multipliers farthest from 1 form the nontrivial pair
    std::array<std::complex<double>, 4> sorted = mu;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return std::abs(a - 1.0) > std::abs(b - 1.0);
    });
    const auto a = sorted[0];
    const auto b = sorted[1];
    if (std::abs(a.imag()) > 1e-8 || std::abs(a - b) > 1e-6)
        return Stability::elliptic;
    return Stability::degenerate;
}

/// Integrates the variational equations over one period with RK4.
inline MonodromyResult monodromy(const SystemParams& params, const PhaseState& s0, double period, double k = 1e-3) {
    if (!(period > 0.0))
        throw InvalidArgument("monodromy: period must be positive");
    auto field = [&](const detail::Variational& v) -> detail::Variational {
        return {vector_field(params, v.s), field_jacobian(params, v.s) * v.M};
    };
    const std::size_t n = step_count(period, k);
    const double dt = period / static_cast<double>(n);
    detail::Variational v{s0, Matrix4::Identity()};
    for (std::size_t i = 0; i < n; ++i)
        v = rk4_step(field, v, dt);

    MonodromyResult r;
    r.matrix = v.M;
    r.determinant = v.M.determinant();
    const Matrix4 J = symplectic_form();
    r.symplectic_defect = (v.M.transpose() * J * v.M - J).cwiseAbs().maxCoeff();
    Eigen::EigenSolver<Matrix4> es(v.M, false);
    for (int i = 0; i < 4; ++i)
        r.multipliers[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    std::sort(r.multipliers.begin(), r.multipliers.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    r.stability = classify(r.multipliers);
    return r;
}

inline MonodromyResult monodromy(const SystemParams& params, const OrbitResult& orbit, double k = 1e-3) {
    return monodromy(params, orbit.initial_state, orbit.period, k);
}

struct ShootConfig {
    /// Coordinate held at zero by the section (0 = q1, 1 = p1, 2 = q2, 3 = p2);
    /// -1 picks the vanishing seed coordinate the flow crosses fastest.
    int section_index = -1;
    double k = 1e-3;
    double tol = 1e-9;
    int max_iterations = 40;
    double fd_step = 1e-6;
    /// Singular values below this fraction of the largest count as zero.
    double rank_tol = 1e-6;
};

/// Closure defect Fl^T(s) - s with the reference integrator.
inline PhaseState closure(const SystemParams& params, const PhaseState& s, double T, double k = 1e-3) {
    return advance(params, s, T, k, Method::reference) - s;
}

/// Section coordinate for a seed: among coordinates that vanish at the seed,
/// the one whose time derivative is largest in magnitude.
inline int choose_section(const SystemParams& params, const PhaseState& seed) {
    const auto s = seed.to_array();
    const auto f = vector_field(params, seed).to_array();
    const double zero_tol = 1e-6 * (1.0 + norm(seed));
    int best = -1;
    for (std::size_t i = 0; i < 4; ++i)
        if (std::abs(s[i]) <= zero_tol && (best < 0 || std::abs(f[i]) > std::abs(f[static_cast<std::size_t>(best)])))
            best = static_cast<int>(i);
    if (best < 0 || f[static_cast<std::size_t>(best)] == 0.0)
        throw InvalidArgument("shoot_periodic: seed does not lie on a coordinate section crossed by the flow");
    return best;
}

/// Solves Fl^T(s) = s on the section {s[section_index] = 0}. The unknowns are
/// the three free coordinates and T; the energy is left free, so the Jacobian
/// has a one-dimensional kernel along the orbit family and the Newton step is
/// the rank-3 truncated SVD solution.
inline OrbitResult shoot_periodic(const SystemParams& params, const PhaseState& seed, double T_guess,
                                  const ShootConfig& cfg = {}) {
    params.validate();
    if (!(T_guess > 0.0))
        throw InvalidArgument("shoot_periodic: T_guess must be positive");
    // Uncoupled commensurate oscillators: every orbit is periodic with the
    // common period, so no orbit is isolated whatever T_guess says.
    if (params.epsilon == 0.0) {
        const double ratio = params.omega2 / params.omega1;
        for (int q = 1; q <= 12; ++q)
            if (std::abs(ratio * q - std::round(ratio * q)) < 1e-12)
                throw DegenerateJacobian("shoot_periodic: uncoupled resonant oscillators; all orbits are periodic");
    }
    const int section = cfg.section_index >= 0 ? cfg.section_index : choose_section(params, seed);
    if (section > 3)
        throw InvalidArgument("shoot_periodic: section_index must be in 0..3");

    std::array<int, 3> free_idx{};
    for (int i = 0, c = 0; i < 4; ++i)
        if (i != section)
            free_idx[static_cast<std::size_t>(c++)] = i;

    auto to_state = [&](const Eigen::Vector4d& u) {
        std::array<double, 4> a{};
        for (std::size_t c = 0; c < 3; ++c)
            a[static_cast<std::size_t>(free_idx[c])] = u[static_cast<Eigen::Index>(c)];
        return PhaseState::from_array(a);
    };
    auto F = [&](const Eigen::Vector4d& u) {
        const auto d = closure(params, to_state(u), u[3], cfg.k).to_array();
        return Eigen::Vector4d(d[0], d[1], d[2], d[3]);
    };

    const auto sa = seed.to_array();
    Eigen::Vector4d u(sa[static_cast<std::size_t>(free_idx[0])], sa[static_cast<std::size_t>(free_idx[1])],
                      sa[static_cast<std::size_t>(free_idx[2])], T_guess);
    int iterations = 0;
    Eigen::Vector4d r = F(u);
    // The rank test runs even when the seed already closes, so a seed inside a
    // continuum of periodic orbits is reported instead of accepted.
    for (int it = 0;; ++it) {
        Matrix4 J;
        for (int c = 0; c < 4; ++c) {
            Eigen::Vector4d e = Eigen::Vector4d::Zero();
            e[c] = cfg.fd_step;
            J.col(c) = (F(u + e) - F(u - e)) / (2.0 * cfg.fd_step);
        }
        Eigen::JacobiSVD<Matrix4> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < 4; ++i)
            if (sv[i] > cfg.rank_tol * sv[0])
                ++rank;
        if (rank < 3)
            throw DegenerateJacobian("shoot_periodic: Jacobian rank " + std::to_string(rank) +
                                     " < 3; the seed lies in a continuum of periodic orbits");
        if (r.norm() < cfg.tol) {
            iterations = it;
            break;
        }
        if (it >= cfg.max_iterations)
            throw NoConvergence("shoot_periodic: no convergence after " + std::to_string(cfg.max_iterations) +
                                " iterations (residual " + format_double(r.norm()) + ")");
        Eigen::Vector4d step = Eigen::Vector4d::Zero();
        for (int i = 0; i < 3; ++i)
            step -= (svd.matrixU().col(i).dot(r) / sv[i]) * svd.matrixV().col(i);
        u += step;
        r = F(u);
    }

    OrbitResult res;
    res.initial_state = to_state(u);
    res.period = u[3];
    res.closure_residual = r.norm();
    res.iterations = iterations;
    res.energy = hamiltonian(params, res.initial_state);
    const MonodromyResult m = monodromy(params, res.initial_state, res.period, cfg.k);
    res.floquet_multipliers = m.multipliers;
    res.stability = m.stability;
    return res;
}

inline nlohmann::json to_json(const OrbitResult& o) {
    nlohmann::json mu = nlohmann::json::array();
    for (const auto& m : o.floquet_multipliers)
        mu.push_back({m.real(), m.imag()});
    const auto s = o.initial_state;
    return {{"initial_state", {s.q1, s.p1, s.q2, s.p2}},
            {"period", o.period},
            {"residual", o.closure_residual},
            {"multipliers", mu},
            {"stability", to_string(o.stability)},
            {"iterations", o.iterations},
            {"energy", o.energy}};
}

inline nlohmann::json to_json(const FixedPointResult& f) {
    const auto s = f.lifted;
    return {{"p1", f.p1},
            {"q1", f.q1},
            {"period", f.period},
            {"residual", f.residual},
            {"iterations", f.iterations},
            {"lifted_state", {s.q1, s.p1, s.q2, s.p2}}};
}

struct SweepRow {
    double epsilon = 0.0;
    OrbitResult orbit;
};

/// CSV with header epsilon,q1,p1,q2,p2,period,residual,max_multiplier_deviation,stability.
inline void write_orbit_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "epsilon,q1,p1,q2,p2,period,residual,max_multiplier_deviation,stability\n";
    for (const auto& r : rows) {
        double dev = 0.0;
        for (const auto& m : r.orbit.floquet_multipliers)
            dev = std::max(dev, std::abs(std::abs(m) - 1.0));
        const auto& s = r.orbit.initial_state;
        os << format_double(r.epsilon) << ',' << format_double(s.q1) << ',' << format_double(s.p1) << ','
           << format_double(s.q2) << ',' << format_double(s.p2) << ',' << format_double(r.orbit.period) << ','
           << format_double(r.orbit.closure_residual) << ',' << format_double(dev) << ','
           << to_string(r.orbit.stability) << '\n';
    }
}

} // namespace wilberforce
