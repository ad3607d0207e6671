#pragma once

// Singular reduced phase space of the 1:2 resonance on an energy level h.
//
// Coordinates (x, y, z) = (rho3, rho4, rho1); the reduced space
// M_h = {F = 0, 0 < z <= 2h} with F = x^2 + y^2 - z^2 (2h - z) is a pinched
// sphere. Functions on it carry the bracket {f, g} = 2 <grad g, grad f x grad F>.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dynamics.hpp"
#include "errors.hpp"
#include "polynomial.hpp"
#include "svg.hpp"
#include "symbolic.hpp"

namespace wilberforce {

/// Tolerances used throughout the reduced-space analysis.
namespace tolerance {
inline constexpr double surface = 1e-9;            // |F| for membership of M_h
inline constexpr double gradient = 1e-10;          // criticality residual |grad Q x grad F|
inline constexpr double cluster = 1e-6;            // merge distance for polished critical points
inline constexpr double circle_z = 1e-7;           // z spread inside one critical circle
inline constexpr double singular_exclusion = 1e-4; // candidates with z < this * h are dropped
inline constexpr int grid = 400;                   // (z, phi) grid resolution
} // namespace tolerance

struct HopfPoint {
    double rho1 = 0.0;
    double rho2 = 0.0;
    double rho3 = 0.0;
    double rho4 = 0.0;
};

struct ReducedPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline Vec3 to_vec(const ReducedPoint& p) { return {p.x, p.y, p.z}; }
inline ReducedPoint to_point(const Vec3& v) { return {v[0], v[1], v[2]}; }

inline HopfPoint hopf_map(const PhaseState& s) noexcept {
    const double d = s.p1 * s.p1 - s.q1 * s.q1;
    return {
        s.q1 * s.q1 + s.p1 * s.p1,
        4.0 * s.q2 * s.q2 + s.p2 * s.p2,
        s.p2 * d + 4.0 * s.p1 * s.q1 * s.q2,
        2.0 * s.q2 * d - 2.0 * s.q1 * s.p1 * s.p2,
    };
}

inline ReducedPoint to_reduced(const HopfPoint& hp) noexcept { return {hp.rho3, hp.rho4, hp.rho1}; }

inline double syzygy_residual(const HopfPoint& hp) noexcept {
    return hp.rho3 * hp.rho3 + hp.rho4 * hp.rho4 - hp.rho1 * hp.rho1 * hp.rho2;
}

inline double casimir_F(const ReducedPoint& p, double h) noexcept {
    return p.x * p.x + p.y * p.y - p.z * p.z * (2.0 * h - p.z);
}

inline Vec3 casimir_gradient(const ReducedPoint& p, double h) noexcept {
    return {2.0 * p.x, 2.0 * p.y, -4.0 * h * p.z + 3.0 * p.z * p.z};
}

/// Scalar field on (x, y, z) given by an exact polynomial in (x, y, z, h)
/// with h bound to a number. Derivatives are exact polynomials evaluated in
/// double precision.
class ReducedFunction {
public:
    ReducedFunction() = default;

    ReducedFunction(sym::ReducedPoly poly, double h) : poly_(std::move(poly)), h_(h) {
        value_ = sym::NumericPolynomial(poly_);
        for (std::size_t i = 0; i < 3; ++i) {
            const auto d = poly_.derivative(i);
            grad_[i] = sym::NumericPolynomial(d);
            for (std::size_t j = 0; j < 3; ++j)
                hess_[i][j] = sym::NumericPolynomial(d.derivative(j));
        }
    }

    const sym::ReducedPoly& polynomial() const noexcept { return poly_; }
    double h() const noexcept { return h_; }

    double operator()(const ReducedPoint& p) const { return value_(args(p)); }

    Vec3 gradient(const ReducedPoint& p) const {
        const auto a = args(p);
        return {grad_[0](a), grad_[1](a), grad_[2](a)};
    }

    Mat3 hessian(const ReducedPoint& p) const {
        const auto a = args(p);
        Mat3 m;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hess_[i][j](a);
        return m;
    }

private:
    std::array<double, 4> args(const ReducedPoint& p) const { return {p.x, p.y, p.z, h_}; }

    sym::ReducedPoly poly_;
    double h_ = 0.0;
    sym::NumericPolynomial value_;
    std::array<sym::NumericPolynomial, 3> grad_;
    std::array<std::array<sym::NumericPolynomial, 3>, 3> hess_;
};

namespace detail {

inline sym::ReducedPoly rvar(std::size_t i) { return sym::ReducedPoly::variable(i); }

} // namespace detail

/// F = x^2 + y^2 - z^2 (2h - z) as a function on R^3.
inline ReducedFunction casimir_function(double h) {
    using detail::rvar;
    const auto F = rvar(0).pow(2) + rvar(1).pow(2) - rvar(2).pow(2) * (sym::Rational(2) * rvar(3) - rvar(2));
    return {F, h};
}

/// One of the coordinate functions x, y, z.
inline ReducedFunction coordinate_function(std::size_t i, double h) { return {detail::rvar(i), h}; }

/// Substitutes rho1 = z, rho2 = 2h - z, rho3 = x, rho4 = y, keeping h symbolic.
inline sym::ReducedPoly restrict_to_level_exact(const sym::HopfPoly& P) {
    using detail::rvar;
    return P.substitute<sym::ReducedVars>(
        {rvar(2), sym::Rational(2) * rvar(3) - rvar(2), rvar(0), rvar(1)});
}

inline ReducedFunction restrict_to_level(const sym::HopfPoly& P, double h) {
    if (!(h > 0.0))
        throw InvalidArgument("restrict_to_level: h must be positive");
    return {restrict_to_level_exact(P), h};
}

/// {f, g}(p) = 2 <grad g, grad f x grad F>.
inline double reduced_bracket(const ReducedFunction& f, const ReducedFunction& g, const ReducedPoint& p, double h) {
    return 2.0 * g.gradient(p).dot(f.gradient(p).cross(casimir_gradient(p, h)));
}

/// X_Q(p) = 2 grad Q x grad F.
inline Vec3 reduced_vector_field(const ReducedFunction& Q, const ReducedPoint& p, double h) {
    return 2.0 * Q.gradient(p).cross(casimir_gradient(p, h));
}

/// Normal forms of the quartic coupling in Hopf variables. N2 is written in
/// the representative without rho1^2 rho2, which is the form whose gradient
/// enters the degeneracy analysis.
struct ResonantNormalForms {
    sym::HopfPoly n1;
    sym::HopfPoly n2;
};

inline const ResonantNormalForms& resonant_normal_forms() {
    static const ResonantNormalForms forms = [] {
        const auto H1 = sym::coupling_poly();
        ResonantNormalForms f;
        f.n1 = sym::to_hopf(sym::normal_form_order1(H1));
        f.n2 = sym::canonicalize(sym::to_hopf(sym::normal_form_order2(H1)), sym::SyzygyOrder::rho1_rho2_reduced);
        return f;
    }();
    return forms;
}

/// K = N1 restricted to M_h.
inline ReducedFunction k_function(double h) { return restrict_to_level(resonant_normal_forms().n1, h); }

/// K_eps = N1 + eps N2 restricted to M_h (eps converted to an exact rational).
inline ReducedFunction k_eps_function(double h, double epsilon) {
    const auto& nf = resonant_normal_forms();
    return restrict_to_level(nf.n1 + sym::Rational(epsilon) * nf.n2, h);
}

/// Point of M_h for z in (0, 2h] and angle phi.
inline ReducedPoint surface_point(double h, double z, double phi) {
    const double r = z * std::sqrt(std::max(0.0, 2.0 * h - z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

struct CriticalPoint {
    ReducedPoint location;
    double residual = 0.0;      // |grad Q x grad F|
    double gradient_norm = 0.0; // |grad Q|
    double casimir = 0.0;       // F at the point
};

struct CriticalCircle {
    double z = 0.0;
    double radius_squared = 0.0;
    double max_residual = 0.0;
    double max_gradient_norm = 0.0;
    std::size_t samples = 0;
};

struct CriticalSetReport {
    double h = 0.0;
    std::vector<CriticalPoint> points;
    std::vector<CriticalCircle> circles;
    std::size_t seeds = 0;
    std::size_t rejected = 0;
};

namespace detail {

inline double parallel_residual(const ReducedFunction& Q, const ReducedPoint& p) {
    return Q.gradient(p).cross(casimir_gradient(p, Q.h())).norm();
}

// Damped Gauss-Newton on r(z, phi) = grad Q x grad F over the surface chart.
template <typename Residual>
std::pair<double, double> polish_on_surface(const Residual& residual, double h, double z, double phi,
                                            double z_floor) {
    auto clamp_z = [&](double v) { return std::clamp(v, z_floor, 2.0 * h); };
    Vec3 r = residual(z, phi);
    double lambda = 1e-9;
    for (int it = 0; it < 100 && r.norm() > 1e-15; ++it) {
        Eigen::Matrix<double, 3, 2> J;
        const double dz = 1e-7 * std::max(1.0, h);
        const double dphi = 1e-7;
        const double zp = clamp_z(z + dz), zm = clamp_z(z - dz);
        J.col(0) = (residual(zp, phi) - residual(zm, phi)) / (zp - zm);
        J.col(1) = (residual(z, phi + dphi) - residual(z, phi - dphi)) / (2.0 * dphi);
        const Eigen::Matrix2d A = J.transpose() * J;
        const Eigen::Vector2d g = J.transpose() * r;
        bool accepted = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::Matrix2d D = A;
            D.diagonal().array() += lambda * std::max(1e-30, A.trace());
            const Eigen::Vector2d step = D.ldlt().solve(-g);
            const double zn = clamp_z(z + step[0]);
            const double pn = phi + step[1];
            const Vec3 rn = residual(zn, pn);
            if (rn.norm() < r.norm()) {
                z = zn;
                phi = pn;
                r = rn;
                lambda = std::max(1e-15, lambda * 0.1);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted)
            break;
    }
    return {z, phi};
}

} // namespace detail

/// Critical points of Q on M_h, i.e. zeros of the reduced field (grad Q parallel to
/// grad F). Scans a (z, phi) grid, polishes grid minima and groups the results
/// into isolated points and circles z = const.
inline CriticalSetReport find_reduced_critical_points(const ReducedFunction& Q, int grid = tolerance::grid) {
    const double h = Q.h();
    if (!(h > 0.0))
        throw InvalidArgument("critical point search needs h > 0");
    const double two_pi = 2.0 * std::numbers::pi;
    const double z_floor = 1e-6 * h;
    auto res_vec = [&](double z, double phi) -> Vec3 {
        const ReducedPoint p = surface_point(h, z, phi);
        return Q.gradient(p).cross(casimir_gradient(p, h));
    };

    const auto n = static_cast<std::size_t>(grid);
    std::vector<double> val(n * n);
    auto zi = [&](std::size_t i) { return 2.0 * h * static_cast<double>(i + 1) / static_cast<double>(n); };
    auto pj = [&](std::size_t j) { return two_pi * static_cast<double>(j) / static_cast<double>(n); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            val[i * n + j] = res_vec(zi(i), pj(j)).norm();

    CriticalSetReport report;
    report.h = h;
    std::vector<CriticalPoint> found;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = val[i * n + j];
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0)
                        continue;
                    const long ii = static_cast<long>(i) + di;
                    if (ii < 0 || ii >= static_cast<long>(n))
                        continue;
                    const std::size_t jj = (j + n + static_cast<std::size_t>(dj + 1) - 1) % n;
                    if (val[static_cast<std::size_t>(ii) * n + jj] < v) {
                        is_min = false;
                        break;
                    }
                }
            if (!is_min)
                continue;
            ++report.seeds;
            const auto [z, phi] = detail::polish_on_surface(res_vec, h, zi(i), pj(j), z_floor);
            const ReducedPoint p = surface_point(h, z, phi);
            const double r = detail::parallel_residual(Q, p);
            if (z < tolerance::singular_exclusion * h || r > tolerance::gradient) {
                ++report.rejected;
                continue;
            }
            found.push_back({p, r, Q.gradient(p).norm(), casimir_F(p, h)});
        }
    }

    // Merge duplicates.
    const double merge = tolerance::cluster * std::max(1.0, std::pow(h, 1.5));
    std::vector<CriticalPoint> distinct;
    for (const auto& c : found) {
        bool dup = false;
        for (auto& d : distinct)
            if ((to_vec(d.location) - to_vec(c.location)).norm() < merge) {
                if (c.residual < d.residual)
                    d = c;
                dup = true;
                break;
            }
        if (!dup)
            distinct.push_back(c);
    }

    // Group by z; many distinct points spread around one z value form a circle.
    std::sort(distinct.begin(), distinct.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.location.z < b.location.z; });
    std::size_t start = 0;
    while (start < distinct.size()) {
        std::size_t end = start + 1;
        while (end < distinct.size() &&
               distinct[end].location.z - distinct[start].location.z < tolerance::circle_z * std::max(1.0, h))
            ++end;
        std::vector<double> angles;
        for (std::size_t k = start; k < end; ++k)
            angles.push_back(std::atan2(distinct[k].location.y, distinct[k].location.x));
        std::sort(angles.begin(), angles.end());
        double max_gap = angles.empty() ? two_pi : two_pi - (angles.back() - angles.front());
        for (std::size_t k = 1; k < angles.size(); ++k)
            max_gap = std::max(max_gap, angles[k] - angles[k - 1]);
        if (end - start >= 16 && max_gap < std::numbers::pi / 4.0) {
            CriticalCircle c;
            c.samples = end - start;
            for (std::size_t k = start; k < end; ++k) {
                const auto& p = distinct[k];
                c.z += p.location.z;
                c.radius_squared += p.location.x * p.location.x + p.location.y * p.location.y;
                c.max_residual = std::max(c.max_residual, p.residual);
                c.max_gradient_norm = std::max(c.max_gradient_norm, p.gradient_norm);
            }
            c.z /= static_cast<double>(c.samples);
            c.radius_squared /= static_cast<double>(c.samples);
            report.circles.push_back(c);
        } else {
            for (std::size_t k = start; k < end; ++k)
                report.points.push_back(distinct[k]);
        }
        start = end;
    }
    return report;
}

/// Critical set of K = N1 on M_h: expected (0, 0, 2h) and the circle
/// x^2 + y^2 = h^3, z = h.
inline CriticalSetReport critical_points_N1(double h, int grid = tolerance::grid) {
    return find_reduced_critical_points(k_function(h), grid);
}

struct HessianReport {
    double h = 0.0;
    ReducedPoint at;
    Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();
    double determinant = 0.0;
    std::array<double, 2> eigenvalues{};
    bool non_degenerate = false;
    /// 1 / (16 h^2) and which computed quantity (if any) equals it.
    double reference_value = 0.0;
    std::string matches_reference = "none";

    std::string verdict() const { return non_degenerate ? "non-degenerate" : "degenerate"; }
};

/// Hessian of K~(x, y) = Q(x, y, psi(x, y)) where z = psi(x, y) solves F = 0
/// near the point, by implicit differentiation.
inline HessianReport hessian_test(const ReducedFunction& Q, const ReducedPoint& at, double reference_tol = 1e-12) {
    const double h = Q.h();
    const ReducedFunction F = casimir_function(h);
    const Vec3 dF = F.gradient(at);
    const Mat3 d2F = F.hessian(at);
    if (std::abs(dF[2]) < 1e-12)
        throw DegenerateChart("dF/dz vanishes at the requested point; z = psi(x, y) is not defined");
    const Vec3 dQ = Q.gradient(at);
    const Mat3 d2Q = Q.hessian(at);

    const std::array<double, 2> psi{-dF[0] / dF[2], -dF[1] / dF[2]};
    HessianReport rep;
    rep.h = h;
    rep.at = at;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double psi_ij =
                -(d2F(i, j) + d2F(i, 2) * psi[j] + d2F(j, 2) * psi[i] + d2F(2, 2) * psi[i] * psi[j]) / dF[2];
            rep.hessian(i, j) = d2Q(i, j) + d2Q(i, 2) * psi[j] + d2Q(j, 2) * psi[i] + d2Q(2, 2) * psi[i] * psi[j] +
                                dQ[2] * psi_ij;
        }
    rep.determinant = rep.hessian.determinant();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(rep.hessian);
    rep.eigenvalues = {es.eigenvalues()[0], es.eigenvalues()[1]};
    rep.non_degenerate = std::abs(rep.determinant) > 1e-14;
    rep.reference_value = 1.0 / (16.0 * h * h);
    if (std::abs(rep.determinant - rep.reference_value) <= reference_tol)
        rep.matches_reference = "determinant";
    else if (std::abs(rep.eigenvalues[0] - rep.reference_value) <= reference_tol &&
             std::abs(rep.eigenvalues[1] - rep.reference_value) <= reference_tol)
        rep.matches_reference = "eigenvalues";
    return rep;
}

/// Hessian test of K at the pole (0, 0, 2h).
inline HessianReport hessian_test(double h) {
    if (!(h > 0.0))
        throw InvalidArgument("hessian_test: h must be positive");
    return hessian_test(k_function(h), {0.0, 0.0, 2.0 * h});
}

/// Axis point where grad K_eps does not depend on eps.
struct AxisPoint {
    double z = 0.0;
    double casimir = 0.0;
    double parallel_residual = 0.0;
    bool on_surface = false;
};

struct EpsilonAnalysis {
    double epsilon = 0.0;
    /// Smallest |grad K_eps| found on M_h (grid scan plus polishing).
    double min_gradient_norm = 0.0;
    ReducedPoint argmin;
    std::vector<AxisPoint> axis_points;
    /// Zeros of the reduced field X_{K_eps} on M_h.
    CriticalSetReport field_zeros;
    std::size_t certificate_samples = 0;
    /// min over samples of |grad K_eps| - eps h^{3/2} / 96 on Gamma_h.
    double certificate_margin = 0.0;
    bool certificate_ok = false;
};

struct DegeneracyReport {
    double h = 0.0;
    /// Exact check: grad N1 = 0 forces z = h, and there the eps-order terms of
    /// grad K_eps on the axis reduce to c h^2 with c != 0.
    bool symbolic_no_common_zero = false;
    std::string symbolic_detail;
    std::vector<EpsilonAnalysis> runs;
};

namespace detail {

// Order-by-order vanishing of grad K_eps on M_h. Order eps^0: dK/dz = (h - z)/8
// has its only zero at z = h. Order eps^1 at z = h: dN2/dx, dN2/dy vanish only
// for x = y = 0, and dN2/dz(0, 0, h) is a nonzero multiple of h^2.
inline std::pair<bool, std::string> symbolic_degeneracy_check() {
    using detail::rvar;
    const auto& nf = resonant_normal_forms();
    const sym::ReducedPoly k0 = restrict_to_level_exact(nf.n1);
    const sym::ReducedPoly k1 = restrict_to_level_exact(nf.n2);
    const sym::ReducedPoly expected_dz = sym::Rational(1, 8) * (rvar(3) - rvar(2));
    const bool order0 = k0.derivative(0).is_zero() && k0.derivative(1).is_zero() && k0.derivative(2) == expected_dz;
    const sym::ReducedPoly k1x = k1.derivative(0);
    const sym::ReducedPoly k1y = k1.derivative(1);
    const bool xy_linear = k1x == sym::Rational(-1, 96) * rvar(0) && k1y == sym::Rational(-1, 24) * rvar(1);
    // dN2/dz at x = y = 0, z = h.
    const sym::ReducedPoly zero = sym::ReducedPoly{};
    const sym::ReducedPoly at_axis = k1.derivative(2).substitute<sym::ReducedVars>({zero, zero, rvar(3), rvar(3)});
    const bool nonzero_h2 = at_axis.size() == 1 && at_axis.terms().begin()->first == sym::Exponents{0, 0, 0, 2};
    std::string detail = "dK/dz = " + sym::to_string(k0.derivative(2)) + "; dN2/dx = " + sym::to_string(k1x) +
                         "; dN2/dy = " + sym::to_string(k1y) + "; dN2/dz(0,0,h) = " + sym::to_string(at_axis);
    return {order0 && xy_linear && nonzero_h2, detail};
}

inline std::vector<double> bisect_roots(const std::function<double(double)>& g, double a, double b, int cells) {
    std::vector<double> roots;
    const double w = (b - a) / cells;
    for (int i = 0; i < cells; ++i) {
        double lo = a + w * i;
        double hi = lo + w;
        double glo = g(lo);
        const double ghi = g(hi);
        if (glo == 0.0) {
            roots.push_back(lo);
            continue;
        }
        // a root exactly on a cell boundary is recorded by the next cell
        if (ghi == 0.0 && i + 1 < cells)
            continue;
        if ((glo > 0.0) == (ghi > 0.0) && ghi != 0.0)
            continue;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if ((gm > 0.0) == (glo > 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

} // namespace detail

/// Analysis of grad K_eps = grad(N1 + eps N2) on M_h for each eps.
inline DegeneracyReport critical_points_Keps(double h, const std::vector<double>& epsilons,
                                             int grid = tolerance::grid) {
    if (!(h > 0.0))
        throw InvalidArgument("critical_points_Keps: h must be positive");
    DegeneracyReport rep;
    rep.h = h;
    std::tie(rep.symbolic_no_common_zero, rep.symbolic_detail) = detail::symbolic_degeneracy_check();
    const double two_pi = 2.0 * std::numbers::pi;
    const ReducedFunction K0 = k_function(h);

    for (double eps : epsilons) {
        if (!(eps > 0.0) || eps > 1.0)
            throw InvalidArgument("critical_points_Keps: epsilon must lie in (0, 1]");
        EpsilonAnalysis a;
        a.epsilon = eps;
        const ReducedFunction K = k_eps_function(h, eps);

        // Smallest |grad K_eps| on M_h.
        auto grad_at = [&](double z, double phi) -> Vec3 { return K.gradient(surface_point(h, z, phi)); };
        double best = INFINITY;
        double bz = 0.0, bphi = 0.0;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                const double z = 2.0 * h * (i + 1) / grid;
                const double phi = two_pi * j / grid;
                const double v = grad_at(z, phi).norm();
                if (v < best) {
                    best = v;
                    bz = z;
                    bphi = phi;
                }
            }
        const auto [pz, pphi] = detail::polish_on_surface(grad_at, h, bz, bphi, 1e-6 * h);
        a.argmin = surface_point(h, pz, pphi);
        a.min_gradient_norm = std::min(best, K.gradient(a.argmin).norm());

        // Axis points where the eps-order part of dK_eps/dz vanishes.
        auto eps_part = [&](double z) {
            const ReducedPoint p{0.0, 0.0, z};
            return (K.gradient(p)[2] - K0.gradient(p)[2]) / eps;
        };
        for (double z : detail::bisect_roots(eps_part, 0.0, 2.5 * h, 5000)) {
            const ReducedPoint p{0.0, 0.0, z};
            AxisPoint ap;
            ap.z = z;
            ap.casimir = casimir_F(p, h);
            ap.on_surface = std::abs(ap.casimir) < tolerance::surface;
            ap.parallel_residual = detail::parallel_residual(K, p);
            a.axis_points.push_back(ap);
        }

        a.field_zeros = find_reduced_critical_points(K, grid);

        // Certificate on Gamma_h.
        const double bound = eps * std::pow(h, 1.5) / 96.0;
        a.certificate_samples = 100;
        a.certificate_margin = INFINITY;
        for (std::size_t k = 0; k < a.certificate_samples; ++k) {
            const double phi = two_pi * static_cast<double>(k) / static_cast<double>(a.certificate_samples);
            const ReducedPoint p{std::pow(h, 1.5) * std::cos(phi), std::pow(h, 1.5) * std::sin(phi), h};
            a.certificate_margin = std::min(a.certificate_margin, K.gradient(p).norm() - bound);
        }
        a.certificate_ok = a.certificate_margin >= -1e-15 * std::max(1.0, bound);
        rep.runs.push_back(std::move(a));
    }
    return rep;
}

inline nlohmann::json point_json(const ReducedPoint& p) { return nlohmann::json::array({p.x, p.y, p.z}); }

inline nlohmann::json to_json(const CriticalSetReport& r) {
    nlohmann::json j;
    j["h"] = r.h;
    j["seeds"] = r.seeds;
    j["rejected"] = r.rejected;
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& p : r.points)
        sets.push_back({{"type", "point"},
                        {"location", point_json(p.location)},
                        {"residual", p.residual},
                        {"gradient_norm", p.gradient_norm},
                        {"casimir", p.casimir}});
    for (const auto& c : r.circles)
        sets.push_back({{"type", "circle"},
                        {"z", c.z},
                        {"radius_squared", c.radius_squared},
                        {"samples", c.samples},
                        {"residual", c.max_residual},
                        {"gradient_norm", c.max_gradient_norm}});
    j["critical_sets"] = sets;
    return j;
}

inline nlohmann::json to_json(const HessianReport& r) {
    return {{"h", r.h},
            {"at", point_json(r.at)},
            {"hessian", {{r.hessian(0, 0), r.hessian(0, 1)}, {r.hessian(1, 0), r.hessian(1, 1)}}},
            {"determinant", r.determinant},
            {"eigenvalues", {r.eigenvalues[0], r.eigenvalues[1]}},
            {"verdict", r.verdict()},
            {"reference_value", r.reference_value},
            {"matches_reference", r.matches_reference}};
}

inline nlohmann::json to_json(const DegeneracyReport& r) {
    nlohmann::json j;
    j["h"] = r.h;
    j["symbolic_no_common_zero"] = r.symbolic_no_common_zero;
    j["symbolic_detail"] = r.symbolic_detail;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& a : r.runs) {
        nlohmann::json axis = nlohmann::json::array();
        for (const auto& p : a.axis_points)
            axis.push_back({{"location", point_json({0.0, 0.0, p.z})},
                            {"casimir", p.casimir},
                            {"on_surface", p.on_surface},
                            {"parallel_residual", p.parallel_residual}});
        runs.push_back({{"epsilon", a.epsilon},
                        {"min_gradient_norm", a.min_gradient_norm},
                        {"argmin", point_json(a.argmin)},
                        {"axis_points", axis},
                        {"field_zeros", to_json(a.field_zeros)},
                        {"certificate_samples", a.certificate_samples},
                        {"certificate_margin", a.certificate_margin},
                        {"certificate_ok", a.certificate_ok}});
    }
    j["runs"] = runs;
    return j;
}

/// The section y = 0 of M_h in the (x, z) plane with critical sets overlaid.
inline void write_reduced_svg(std::ostream& os, const CriticalSetReport& r) {
    const double h = r.h;
    svg::Plot plot;
    plot.title = "M_h, y = 0 section, h = " + format_double(h);
    plot.x_label = "x";
    plot.y_label = "z";
    for (double sign : {1.0, -1.0}) {
        svg::Series s;
        s.polyline = true;
        s.color = "#333333";
        for (int i = 0; i <= 400; ++i) {
            const double z = 2.0 * h * i / 400.0;
            s.x.push_back(sign * z * std::sqrt(std::max(0.0, 2.0 * h - z)));
            s.y.push_back(z);
        }
        plot.series.push_back(std::move(s));
    }
    for (const auto& p : r.points)
        plot.markers.push_back({p.location.x, p.location.z, "#d62728", "point"});
    for (const auto& c : r.circles) {
        const double rad = std::sqrt(c.radius_squared);
        plot.markers.push_back({rad, c.z, "#2ca02c", "circle"});
        plot.markers.push_back({-rad, c.z, "#2ca02c", ""});
    }
    svg::write(os, plot);
}

} // namespace wilberforce
