#pragma once

// Poincare section sigma = {(p1, q1) on H = h : q2 = 0} of the resonant
// system, sampled with velocity Verlet and refined by bisection.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <utility>
#include <ostream>
#include <random>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "integrators.hpp"
#include "io.hpp"
#include "parallel.hpp"

namespace wilberforce {

enum class Branch { plus, minus };

inline double sign_of(Branch b) noexcept { return b == Branch::plus ? 1.0 : -1.0; }

/// Which slot of the seed quadruple (j/100, 1.5, p2, 0.01) holds which coordinate.
enum class SeedOrdering {
    /// (p1, q1, p2, q2) = (j/100, 1.5, p2, 0.01)
    section,
    /// (q1, p1, p2, q2) = (j/100, 1.5, p2, 0.01)
    positions_first,
};

enum class CrossingDirection { both, upward, downward };

struct SectionConfig {
    double h = 3.0;
    double epsilon = 0.0;
    Branch branch = Branch::plus;
    std::size_t max_crossings = 500;
    double k = 1e-3;
    std::uint64_t seed = 12345;
    std::size_t count = 10;
    SeedOrdering ordering = SeedOrdering::section;
    CrossingDirection direction = CrossingDirection::both;
    /// Integration stops here even if fewer crossings were found; 0 picks
    /// 2*pi per requested crossing (about four times the unperturbed need).
    double t_max = 0.0;

    double time_limit() const noexcept {
        return t_max > 0.0 ? t_max : 2.0 * std::numbers::pi * static_cast<double>(max_crossings);
    }

    void validate() const {
        // h = 0 is legal input; it simply leaves no room on the shell
        if (!(h >= 0.0))
            throw InvalidArgument("section energy h must be nonnegative");
        if (max_crossings < 1)
            throw InvalidArgument("max_crossings must be at least 1");
        if (!(k > 0.0))
            throw InvalidArgument("step size k must be positive");
        if (!(epsilon >= 0.0))
            throw InvalidArgument("epsilon must be nonnegative");
    }
};

struct SectionPoint {
    double p1 = 0.0;
    double q1 = 0.0;
    double t_cross = 0.0;
    /// Sign of p2 at the crossing (+1 or -1).
    int branch_at_crossing = 1;
};

/// Refinement target for |q2| at a recorded crossing.
inline constexpr double crossing_tolerance = 1e-10;

/// Solves H(q1, p1, q2, p2) = h for p2 (resonant units m = I = w1 = 1, w2 = 2).
inline double solve_p2(double h, double p1, double q1, double q2, double epsilon, Branch branch) {
    const double coupling = q1 * q2;
    const double disc = 2.0 * (h - epsilon * coupling * coupling) - (p1 * p1 + q1 * q1 + 4.0 * q2 * q2);
    if (disc < 0.0)
        throw DiscriminantNegative(disc);
    return sign_of(branch) * std::sqrt(disc);
}

inline PhaseState seed_state(double a, double b, double q2, double h, double epsilon, Branch branch,
                             SeedOrdering ordering) {
    const double p1 = ordering == SeedOrdering::section ? a : b;
    const double q1 = ordering == SeedOrdering::section ? b : a;
    return {q1, p1, q2, solve_p2(h, p1, q1, q2, epsilon, branch)};
}

/// Draws cfg.count seeds (j/100, 1.5, p2, 0.01) with j uniform in [-100, 100],
/// dropping draws that are not on the energy shell.
inline std::vector<PhaseState> sample_initial_conditions(const SectionConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> pick(-100, 100);
    std::vector<PhaseState> out;
    out.reserve(cfg.count);
    for (std::size_t i = 0; i < cfg.count; ++i) {
        const int j = pick(rng);
        try {
            out.push_back(seed_state(j / 100.0, 1.5, 0.01, cfg.h, cfg.epsilon, cfg.branch, cfg.ordering));
        } catch (const DiscriminantNegative&) {
        }
    }
    if (out.empty())
        throw EmptySample("no sampled initial condition lies on the energy shell h = " + format_double(cfg.h));
    return out;
}

namespace detail {

inline bool wanted(CrossingDirection dir, double p2) noexcept {
    switch (dir) {
    case CrossingDirection::upward: return p2 > 0.0;
    case CrossingDirection::downward: return p2 < 0.0;
    default: return true;
    }
}

// Bisection on the sub-step length tau in (0, k] so that q2 of a partial
// Verlet step vanishes.
inline std::pair<PhaseState, double> refine_crossing(const SystemParams& params, const PhaseState& from, double k) {
    double lo = 0.0;
    double hi = k;
    const double sign_lo = from.q2;
    PhaseState best = verlet_step(params, from, hi);
    double best_tau = hi;
    if (std::abs(best.q2) < crossing_tolerance)
        return {best, best_tau};
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const PhaseState s = verlet_step(params, from, mid);
        if (std::abs(s.q2) < std::abs(best.q2)) {
            best = s;
            best_tau = mid;
        }
        if (std::abs(s.q2) < crossing_tolerance || hi - lo < 1e-18)
            break;
        if ((s.q2 > 0.0) == (sign_lo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return {best, best_tau};
}

} // namespace detail

/// Integrates from s0 and records crossings of q2 = 0 until max_crossings are
/// found or the time limit is reached.
inline std::vector<SectionPoint> section_points(const SystemParams& params, const PhaseState& s0,
                                                const SectionConfig& cfg) {
    cfg.validate();
    const double e0 = hamiltonian(params, s0);
    if (std::abs(e0 - cfg.h) > 1e-9 * std::max(1.0, cfg.h))
        throw InvalidArgument("section_points: initial state has H = " + format_double(e0) + ", expected " +
                              format_double(cfg.h));

    std::vector<SectionPoint> points;
    points.reserve(cfg.max_crossings);
    const std::size_t n_steps = step_count(cfg.time_limit(), cfg.k);
    PhaseState s = s0;
    for (std::size_t i = 0; i < n_steps && points.size() < cfg.max_crossings; ++i) {
        const PhaseState next = verlet_step(params, s, cfg.k);
        if (!next.is_finite())
            throw Divergence(i + 1, static_cast<double>(i + 1) * cfg.k);
        const bool crossed = (s.q2 != 0.0) && (next.q2 == 0.0 || (s.q2 > 0.0) != (next.q2 > 0.0));
        if (crossed) {
            const auto [at, tau] = detail::refine_crossing(params, s, cfg.k);
            if (detail::wanted(cfg.direction, at.p2))
                points.push_back({at.p1, at.q1, static_cast<double>(i) * cfg.k + tau, at.p2 >= 0.0 ? 1 : -1});
        }
        s = next;
    }
    return points;
}

struct SectionRun {
    std::size_t ic_index = 0;
    PhaseState initial;
    Branch branch = Branch::plus;
    std::vector<SectionPoint> points;
};

/// Samples initial conditions for each requested branch and computes their
/// sections independently. Runs are ordered by (branch, sample index).
inline std::vector<SectionRun> section_ensemble(const SectionConfig& cfg, const std::vector<Branch>& branches) {
    cfg.validate();
    std::vector<SectionRun> runs;
    for (Branch b : branches) {
        SectionConfig c = cfg;
        c.branch = b;
        for (const auto& s : sample_initial_conditions(c)) {
            SectionRun r;
            r.ic_index = runs.size();
            r.initial = s;
            r.branch = b;
            runs.push_back(std::move(r));
        }
    }
    const SystemParams params = resonant_defaults(cfg.epsilon);
    auto results = parallel_map(runs.size(), [&](std::size_t i) { return section_points(params, runs[i].initial, cfg); });
    for (std::size_t i = 0; i < runs.size(); ++i)
        runs[i].points = std::move(results[i]);
    return runs;
}

/// CSV with header ic_index,t_cross,p1,q1,p2_sign.
inline void write_section_csv(std::ostream& os, const std::vector<SectionRun>& runs) {
    os << "ic_index,t_cross,p1,q1,p2_sign\n";
    for (const auto& r : runs)
        for (const auto& p : r.points)
            os << r.ic_index << ',' << format_double(p.t_cross) << ',' << format_double(p.p1) << ','
               << format_double(p.q1) << ',' << p.branch_at_crossing << '\n';
}

struct CircleStats {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Mean and standard deviation of sqrt(p1^2 + q1^2) over the points.
inline CircleStats radius_stats(const std::vector<SectionPoint>& pts) {
    CircleStats st;
    if (pts.empty())
        return st;
    double sum = 0.0;
    for (const auto& p : pts)
        sum += std::hypot(p.p1, p.q1);
    st.mean = sum / static_cast<double>(pts.size());
    double var = 0.0;
    for (const auto& p : pts) {
        const double d = std::hypot(p.p1, p.q1) - st.mean;
        var += d * d;
    }
    st.stddev = std::sqrt(var / static_cast<double>(pts.size()));
    return st;
}

} // namespace wilberforce
