#pragma once

// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the same
// code backs the acceptance test binary and the `verify` subcommand.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dynamics.hpp"
#include "integrators.hpp"
#include "orbits.hpp"
#include "poincare.hpp"
#include "reduction.hpp"
#include "symbolic.hpp"

namespace wilberforce::acceptance {

enum class Group { symbolic, numeric, reduction, orbits };

inline std::string to_string(Group g) {
    switch (g) {
    case Group::symbolic: return "symbolic";
    case Group::numeric: return "numeric";
    case Group::reduction: return "reduction";
    default: return "orbits";
    }
}

struct Result {
    int id = 0;
    std::string name;
    Group group = Group::symbolic;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    /// Groups to run; empty runs all.
    std::set<Group> groups;
    /// Criterion ids to run; empty runs all (intersected with groups).
    std::set<int> ids;
    /// Test hook: multiplies every tolerance of the named criterion.
    std::map<int, double> tolerance_scale;
    std::uint64_t seed = 20240501;
};

class Context {
public:
    Context(int id, const Options& opts) : id_(id), opts_(opts) {}

    /// Tolerance after applying the tamper hook.
    double tol(double base) const {
        auto it = opts_.tolerance_scale.find(id_);
        return it == opts_.tolerance_scale.end() ? base : base * it->second;
    }

    std::uint64_t seed() const { return opts_.seed; }

    /// Records a named sub-check; the criterion passes only if all do.
    void check(bool ok, const std::string& what) {
        if (!ok) {
            passed_ = false;
            failures_.push_back(what);
        }
    }

    void note(const std::string& s) { notes_.push_back(s); }

    bool passed() const { return passed_; }

    std::string detail() const {
        std::string out;
        for (const auto& f : failures_)
            out += (out.empty() ? "" : "; ") + std::string("FAILED ") + f;
        for (const auto& n : notes_)
            out += (out.empty() ? "" : "; ") + n;
        return out;
    }

private:
    int id_;
    const Options& opts_;
    bool passed_ = true;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

/// Random phase-space polynomial of degree <= max_degree with small rational
/// coefficients.
inline sym::PhasePoly random_phase_poly(std::mt19937_64& rng, int max_degree, int terms) {
    std::uniform_int_distribution<int> exp(0, max_degree);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 6);
    sym::PhasePoly p;
    for (int t = 0; t < terms; ++t) {
        sym::Exponents e{};
        int budget = exp(rng);
        for (std::size_t v = 0; v < sym::num_vars && budget > 0; ++v) {
            std::uniform_int_distribution<int> take(0, budget);
            e[v] = take(rng);
            budget -= e[v];
        }
        p.add_term(e, sym::Rational(num(rng)) / den(rng));
    }
    return p;
}

inline PhaseState random_state(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    // evaluation order fixed for reproducibility
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    return {a, b, c, d};
}

inline void criterion1(Context& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto n1 = sym::to_hopf(sym::normal_form_order1(sym::coupling_poly()));
    const auto expected = sym::Rational(1, 16) * sym::rho(1) * sym::rho(2);
    const double t = detail::seconds_since(t0);
    c.check(sym::canonicalize(n1) == sym::canonicalize(expected), "N1 = " + sym::to_string(n1));
    c.check(t < c.tol(1.0), "runtime " + detail::fmt(t) + " s >= 1 s");
    c.note("N1 = " + sym::to_string(n1) + " in " + detail::fmt(t) + " s");
}

inline void criterion2(Context& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto n2 = sym::to_hopf(sym::normal_form_order2(sym::coupling_poly(), sym::N2Convention::printed));
    const auto expected = sym::Rational(-1, 768) * (sym::Rational(5) * sym::rho(1) * sym::rho(2).pow(2) +
                                                    sym::Rational(4) * sym::rho(3).pow(2) +
                                                    sym::Rational(16) * sym::rho(4).pow(2));
    const double t = detail::seconds_since(t0);
    c.check(sym::equal_modulo_syzygy(n2, expected), "N2 = " + sym::to_string(n2));
    c.check(t < c.tol(5.0), "runtime " + detail::fmt(t) + " s >= 5 s");
    c.note("N2 = " + sym::to_string(n2) + " (= " +
           sym::to_string(sym::canonicalize(n2, sym::SyzygyOrder::rho1_rho2_reduced)) + ") in " + detail::fmt(t) +
           " s");
}

inline void criterion3(Context& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = sym::hopf_generators();
    using sym::rho;
    const sym::HopfPoly zero;
    const std::vector<std::tuple<int, int, sym::HopfPoly>> table{
        {1, 2, zero},
        {1, 3, sym::Rational(-4) * rho(4)},
        {1, 4, sym::Rational(4) * rho(3)},
        {2, 3, sym::Rational(4) * rho(4)},
        {2, 4, sym::Rational(-4) * rho(3)},
        {3, 4, sym::Rational(-4) * rho(1) * (rho(1) - sym::Rational(2) * rho(2))},
    };
    int ok = 0;
    for (const auto& [i, j, expected] : table) {
        const auto got = sym::canonicalize(sym::to_hopf(sym::poisson(g[static_cast<std::size_t>(i - 1)],
                                                                     g[static_cast<std::size_t>(j - 1)])));
        const bool match = sym::equal_modulo_syzygy(got, expected);
        ok += match ? 1 : 0;
        c.check(match, "{rho" + std::to_string(i) + ",rho" + std::to_string(j) + "}: expected " +
                           sym::to_string(expected) + ", computed " + sym::to_string(got));
    }
    const double t = detail::seconds_since(t0);
    c.check(t < c.tol(5.0), "runtime " + detail::fmt(t) + " s");
    c.note(std::to_string(ok) + "/6 relations reproduced");
}

inline void criterion4(Context& c) {
    std::mt19937_64 rng(c.seed());
    const auto H0 = sym::h0_poly();
    std::vector<sym::PhasePoly> cases{sym::coupling_poly()};
    for (int i = 0; i < 10; ++i)
        cases.push_back(random_phase_poly(rng, 4, 8));
    const auto t0 = std::chrono::steady_clock::now();
    int ok = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& f = cases[i];
        const bool holds = sym::poisson(H0, sym::s_operator(f)) == sym::average(f) - f;
        ok += holds ? 1 : 0;
        c.check(holds, "identity fails for case " + std::to_string(i) + ": " + sym::to_string(f));
    }
    const double t = detail::seconds_since(t0);
    c.check(t < c.tol(10.0), "runtime " + detail::fmt(t) + " s");
    c.note(std::to_string(ok) + "/" + std::to_string(cases.size()) + " polynomials satisfy {H0,S(f)} = <f> - f");
}

inline void criterion5(Context& c) {
    const auto syz = sym::expand_hopf(sym::syzygy());
    c.check(syz.is_zero(), "rho3^2 + rho4^2 - rho1^2 rho2 expands to " + sym::to_string(syz));

    std::mt19937_64 rng(c.seed() + 5);
    const SystemParams params = resonant_defaults(0.0);
    const double k = 1e-3;
    const double t_final = 100.0;
    const std::size_t n = step_count(t_final, k);
    std::vector<PhaseState> starts;
    for (int i = 0; i < 10; ++i)
        starts.push_back(random_state(rng));
    const auto drifts = parallel_map(starts.size(), [&](std::size_t i) {
        PhaseState s = starts[i];
        const HopfPoint r0 = hopf_map(s);
        double worst = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            s = reference_step(params, s, k);
            const HopfPoint r = hopf_map(s);
            worst = std::max({worst, std::abs(r.rho1 - r0.rho1), std::abs(r.rho2 - r0.rho2),
                              std::abs(r.rho3 - r0.rho3), std::abs(r.rho4 - r0.rho4)});
        }
        return worst;
    });
    const double worst = *std::max_element(drifts.begin(), drifts.end());
    c.check(worst < c.tol(1e-6), "max rho drift " + detail::fmt(worst));
    c.note("syzygy exact; max rho drift " + detail::fmt(worst) + " over 10 trajectories (RK4, k=1e-3, t=100)");
}

inline void criterion6(Context& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemParams params = resonant_defaults(0.5);
    const PhaseState s0{1.0, 1.0, 1.0, 1.0};
    const double e0 = hamiltonian(params, s0);
    auto run = [&](double k, double& at100) {
        PhaseState s = s0;
        double worst = 0.0;
        const std::size_t n = step_count(1000.0, k);
        const std::size_t n100 = step_count(100.0, k);
        for (std::size_t i = 1; i <= n; ++i) {
            s = verlet_step(params, s, k);
            worst = std::max(worst, std::abs(hamiltonian(params, s) - e0) / e0);
            if (i == n100)
                at100 = worst;
        }
        return worst;
    };
    double e100 = 0.0, e100_half = 0.0;
    const double e1000 = run(1e-3, e100);
    const double e1000_half = run(5e-4, e100_half);
    const double growth = e1000 / e100;
    const double factor = e1000 / e1000_half;
    const double t = detail::seconds_since(t0);
    c.check(e1000 < c.tol(1e-5), "relative energy error " + detail::fmt(e1000));
    c.check(growth < 2.0 * c.tol(1.0), "error growth t=100 -> t=1000 is " + detail::fmt(growth));
    c.check(factor >= 3.0 / c.tol(1.0) && factor <= 5.0 * c.tol(1.0), "halving k reduces error by " + detail::fmt(factor));
    c.check(t < c.tol(120.0), "runtime " + detail::fmt(t) + " s");
    c.note("max rel energy error " + detail::fmt(e1000) + ", growth ratio " + detail::fmt(growth) +
           ", halving factor " + detail::fmt(factor));
}

inline void criterion7(Context& c) {
    SectionConfig cfg;
    cfg.h = 3.0;
    cfg.count = 10;
    cfg.seed = c.seed() + 7;
    cfg.max_crossings = 500;
    cfg.epsilon = 0.0;
    const auto runs0 = section_ensemble(cfg, {Branch::plus});
    double worst_sd = 0.0;
    for (const auto& r : runs0)
        worst_sd = std::max(worst_sd, radius_stats(r.points).stddev);
    c.check(runs0.size() == 10, "sampled " + std::to_string(runs0.size()) + " trajectories");
    c.check(worst_sd < c.tol(1e-6), "eps=0 radius std " + detail::fmt(worst_sd));
    std::string note = "eps=0: max radius std " + detail::fmt(worst_sd);
    for (double eps : {0.5, 1.0}) {
        cfg.epsilon = eps;
        const auto runs = section_ensemble(cfg, {Branch::plus});
        std::size_t got = 0;
        for (const auto& r : runs)
            got += r.points.size();
        const double frac = static_cast<double>(got) / static_cast<double>(runs.size() * cfg.max_crossings);
        c.check(frac >= 0.9 / c.tol(1.0), "eps=" + detail::fmt(eps) + " crossing fraction " + detail::fmt(frac));
        note += "; eps=" + detail::fmt(eps) + ": " + detail::fmt(100.0 * frac) + "% of crossings";
    }
    c.note(note);
}

inline void criterion8(Context& c) {
    std::string note;
    for (double h : {1.0, 2.0}) {
        const auto rep = critical_points_N1(h);
        const std::string H = "h=" + detail::fmt(h) + ": ";
        bool pole = rep.points.size() == 1;
        double worst = 0.0;
        if (pole) {
            const auto& p = rep.points.front();
            pole = std::hypot(p.location.x, p.location.y, p.location.z - 2.0 * h) < 1e-8;
            worst = std::max(worst, p.residual);
        }
        c.check(pole, H + "expected exactly the isolated point (0,0,2h); got " + std::to_string(rep.points.size()) +
                          " points");
        bool circle = rep.circles.size() == 1;
        if (circle) {
            const auto& ci = rep.circles.front();
            circle = std::abs(ci.z - h) < 1e-8 && std::abs(ci.radius_squared - h * h * h) < 1e-8 * h * h * h;
            worst = std::max(worst, ci.max_residual);
        }
        c.check(circle, H + "expected exactly the circle x^2+y^2=h^3, z=h; got " + std::to_string(rep.circles.size()) +
                            " circles");
        c.check(worst < c.tol(1e-10), H + "criticality residual " + detail::fmt(worst));

        const auto hess = hessian_test(h);
        c.check(hess.verdict() == "non-degenerate", H + "verdict " + hess.verdict());
        const double tol = c.tol(1e-12);
        const bool det_ok = std::abs(hess.determinant - hess.reference_value) <= tol;
        const bool eig_ok = std::abs(hess.eigenvalues[0] - hess.reference_value) <= tol &&
                            std::abs(hess.eigenvalues[1] - hess.reference_value) <= tol;
        c.check(det_ok || eig_ok, H + "Hessian det " + detail::fmt(hess.determinant) + ", eigenvalues " +
                                      detail::fmt(hess.eigenvalues[0]) + ", " + detail::fmt(hess.eigenvalues[1]) +
                                      "; expected 1/(16h^2) = " + detail::fmt(hess.reference_value));
        note += (note.empty() ? "" : "; ") + H + "det " + detail::fmt(hess.determinant) + ", eig " +
                detail::fmt(hess.eigenvalues[0]) + ", residual " + detail::fmt(worst);
    }
    c.note(note);
}

inline void criterion9(Context& c) {
    const double h = 1.0;
    const auto rep = critical_points_Keps(h, {0.01, 0.05, 0.1});
    c.check(rep.symbolic_no_common_zero, "order-by-order check: " + rep.symbolic_detail);
    std::string note;
    for (const auto& a : rep.runs) {
        const std::string E = "eps=" + detail::fmt(a.epsilon) + ": ";
        c.check(a.min_gradient_norm > c.tol(1e-8), E + "min |grad K_eps| on M_h " + detail::fmt(a.min_gradient_norm));
        const double tol = c.tol(1e-8);
        auto near = [&](double z) {
            return std::any_of(a.axis_points.begin(), a.axis_points.end(),
                               [&](const AxisPoint& p) { return std::abs(p.z - z) < tol; });
        };
        c.check(a.axis_points.size() == 2 && near(2.0 * h / 3.0) && near(2.0 * h),
                E + "parallelism points on the axis: found " + std::to_string(a.axis_points.size()));
        for (const auto& p : a.axis_points)
            c.check(p.parallel_residual < c.tol(1e-10), E + "grad K_eps x grad F at z=" + detail::fmt(p.z) + " is " +
                                                            detail::fmt(p.parallel_residual));
        c.check(a.certificate_samples == 100 && a.certificate_ok,
                E + "certificate margin " + detail::fmt(a.certificate_margin));
        note += (note.empty() ? "" : "; ") + E + "min|grad| " + detail::fmt(a.min_gradient_norm) + ", margin " +
                detail::fmt(a.certificate_margin) + ", field zeros " +
                std::to_string(a.field_zeros.points.size());
    }
    c.note(note);
}

inline void criterion10(Context& c) {
    std::string note;
    for (double eps : {0.05, 0.1}) {
        const SystemParams params = resonant_defaults(eps);
        const std::string E = "eps=" + detail::fmt(eps) + ": ";
        struct Case {
            const char* name;
            PhaseState seed;
            double period;
        };
        for (const Case& k : {Case{"mode-2", {0, 0, 1, 0}, std::numbers::pi},
                              Case{"mode-1", {1, 0, 0, 0}, 2.0 * std::numbers::pi}}) {
            try {
                const auto orbit = shoot_periodic(params, k.seed, k.period);
                c.check(std::abs(orbit.period - k.period) < c.tol(1e-8),
                        E + k.name + " period " + detail::fmt(orbit.period));
                if (eps == 0.05) {
                    double dev = 0.0;
                    for (const auto& m : orbit.floquet_multipliers)
                        dev = std::max(dev, std::abs(std::abs(m) - 1.0));
                    c.check(dev < c.tol(1e-5), E + k.name + " multiplier modulus deviation " + detail::fmt(dev));
                    const auto mono = monodromy(params, orbit);
                    c.check(mono.symplectic_defect < c.tol(1e-6),
                            E + k.name + " symplectic defect " + detail::fmt(mono.symplectic_defect));
                    note += (note.empty() ? "" : "; ") + E + k.name + " " + to_string(orbit.stability) +
                            ", |mu|-1 <= " + detail::fmt(dev);
                }
            } catch (const Error& ex) {
                c.check(false, E + k.name + ": " + ex.what());
            }
        }
    }
    c.note(note);
}

inline void criterion11(Context& c) {
    const double h = 1.0;
    std::vector<double> eps{0.005, 0.01, 0.02};
    std::vector<double> scaled;
    std::string note;
    for (double e : eps) {
        const std::string E = "eps=" + detail::fmt(e) + ": ";
        try {
            const auto fp = find_fixed_point(h, e, 0.0, 2.0 * std::sqrt(h));
            const double disp = std::hypot(fp.p1, fp.q1 - 2.0 * std::sqrt(h));
            scaled.push_back(disp / e);
            const SystemParams params = resonant_defaults(e);
            const auto orbit = shoot_periodic(params, fp.lifted, fp.period);
            const double closure_err = norm(closure(params, orbit.initial_state, orbit.period));
            c.check(closure_err < c.tol(1e-8), E + "4D orbit closure " + detail::fmt(closure_err));
            const double raw = norm(closure(params, fp.lifted, fp.period));
            note += (note.empty() ? "" : "; ") + E + "q1*=" + detail::fmt(fp.q1) + ", |disp|/eps=" +
                    detail::fmt(disp / e) + ", closure " + detail::fmt(closure_err) + " (raw lift " +
                    detail::fmt(raw) + ")";
        } catch (const Error& ex) {
            c.check(false, E + ex.what());
        }
    }
    for (std::size_t i = 1; i < scaled.size(); ++i) {
        const double ratio = scaled[i] / scaled[i - 1];
        c.check(ratio >= 0.5 / c.tol(1.0) && ratio <= 2.0 * c.tol(1.0),
                "displacement/eps ratio across doubling " + detail::fmt(ratio));
    }
    c.note(note);
}

inline void criterion12(Context& c) {
    const double h = 1.0;
    std::string note;
    for (double q0 : {0.5, 1.0}) {
        std::vector<double> normalized;
        std::vector<double> normalized_quarter;
        for (double e : {0.04, 0.02}) {
            const double T = return_map(h, e, 0.0, q0).time;
            normalized.push_back(std::abs(T - return_time_formula(q0, e)) / (e * e));
            const double quarter = 2.0 * std::numbers::pi - e * (std::numbers::pi / 4.0) * q0 * q0;
            normalized_quarter.push_back(std::abs(T - quarter) / (e * e));
        }
        const double ratio = normalized[1] / normalized[0];
        c.check(ratio >= 0.5 / c.tol(1.0) && ratio <= 2.0 * c.tol(1.0),
                "q1_0=" + detail::fmt(q0) + ": |T - formula|/eps^2 = " + detail::fmt(normalized[0]) + " -> " +
                    detail::fmt(normalized[1]) + " (ratio " + detail::fmt(ratio) + ")");
        note += (note.empty() ? "" : "; ") + std::string("q1_0=") + detail::fmt(q0) + ": ratio " + detail::fmt(ratio) +
                " (with coefficient pi/4: " + detail::fmt(normalized_quarter[0]) + " -> " +
                detail::fmt(normalized_quarter[1]) + ")";
    }
    c.note(note);
}

struct Criterion {
    int id;
    const char* name;
    Group group;
    void (*run)(Context&);
};

inline const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "exact normal form, order 1", Group::symbolic, criterion1},
        {2, "exact normal form, order 2", Group::symbolic, criterion2},
        {3, "Hopf bracket table", Group::symbolic, criterion3},
        {4, "homological identity", Group::symbolic, criterion4},
        {5, "syzygy and invariance", Group::numeric, criterion5},
        {6, "symplectic integrator quality", Group::numeric, criterion6},
        {7, "section sanity", Group::numeric, criterion7},
        {8, "reduced critical sets", Group::reduction, criterion8},
        {9, "degeneracy resolution", Group::reduction, criterion9},
        {10, "normal-mode orbits", Group::orbits, criterion10},
        {11, "fixed point of the return map", Group::orbits, criterion11},
        {12, "return-time expansion", Group::orbits, criterion12},
    };
    return all;
}

inline std::vector<Result> run(const Options& opts, std::ostream* progress = nullptr) {
    std::vector<Result> results;
    for (const auto& cr : criteria()) {
        if (!opts.groups.empty() && !opts.groups.count(cr.group))
            continue;
        if (!opts.ids.empty() && !opts.ids.count(cr.id))
            continue;
        Context ctx(cr.id, opts);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(ctx);
        } catch (const std::exception& ex) {
            ctx.check(false, std::string("exception: ") + ex.what());
        }
        Result r{cr.id, cr.name, cr.group, ctx.passed(), ctx.detail(), detail::seconds_since(t0)};
        if (progress)
            *progress << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << detail::fmt(r.seconds)
                      << " s): " << r.detail << std::endl;
        results.push_back(std::move(r));
    }
    return results;
}

inline bool all_passed(const std::vector<Result>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const Result& r) { return r.passed; });
}

inline nlohmann::json to_json(const std::vector<Result>& rs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rs)
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"group", to_string(r.group)},
                       {"passed", r.passed},
                       {"detail", r.detail},
                       {"seconds", r.seconds}});
    return {{"all_passed", all_passed(rs)}, {"criteria", arr}};
}

} // namespace wilberforce::acceptance
