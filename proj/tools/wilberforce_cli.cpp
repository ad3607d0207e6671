// wilberforce: simulate, section, normal-form, reduce, orbit, verify.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <wilberforce/acceptance.hpp>
#include <wilberforce/cli_support.hpp>
#include <wilberforce/integrators.hpp>
#include <wilberforce/orbits.hpp>
#include <wilberforce/poincare.hpp>
#include <wilberforce/reduction.hpp>
#include <wilberforce/symbolic.hpp>

namespace fs = std::filesystem;
using namespace wilberforce;
using cli::RunConfig;

namespace {

struct CommonFlags {
    double h;
    std::vector<double> epsilons;
    double k = 1e-3;
    std::uint64_t seed = 12345;
    std::string out = "out";
    std::string format = "svg";
};

void add_common(CLI::App* sub, CommonFlags& f, bool eps_required) {
    sub->add_option("--h", f.h, "energy level")->capture_default_str();
    auto* e = sub->add_option("--epsilon", f.epsilons, "coupling strength(s)")->delimiter(',');
    if (eps_required)
        e->required();
    sub->add_option("--k", f.k, "integration step")->capture_default_str();
    sub->add_option("--seed", f.seed, "random seed")->capture_default_str();
    sub->add_option("--out", f.out, "output directory")->capture_default_str();
    sub->add_option("--format", f.format, "csv | json | svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->capture_default_str();
}

RunConfig resolve(const std::string& name, const CommonFlags& f) {
    RunConfig cfg;
    cfg.subcommand = name;
    cfg.h = f.h;
    cfg.epsilons = f.epsilons;
    cfg.k = f.k;
    cfg.seed = f.seed;
    cfg.out = f.out;
    cfg.format = f.format;
    fs::create_directories(cfg.out);
    return cfg;
}

fs::path out_path(const RunConfig& cfg, const std::string& file) { return fs::path(cfg.out) / file; }

int cmd_simulate(RunConfig cfg, const std::string& ic_text, double t_final, std::size_t stride) {
    const PhaseState ic = cli::parse_state(ic_text);
    cfg.extra = {{"initial_state", ic_text}, {"t_final", t_final}, {"stride", stride}};
    cli::write_manifest(cfg);
    for (double eps : cfg.epsilons) {
        const SystemParams params = resonant_defaults(eps);
        params.validate();
        const Trajectory traj = integrate(params, ic, {cfg.k, Method::verlet, t_final, stride});
        const fs::path csv = out_path(cfg, "trajectory_" + cli::eps_tag(eps) + ".csv");
        {
            std::ofstream os(csv, std::ios::binary);
            write_trajectory_csv(os, traj);
        }
        if (cfg.format == "svg") {
            std::ofstream os(out_path(cfg, "trajectory_" + cli::eps_tag(eps) + ".svg"), std::ios::binary);
            cli::trajectory_svg_from_csv(csv.string(), os,
                                         "q1-q2 plane, eps = " + format_double(eps) + ", k = " + format_double(cfg.k));
        }
        std::cout << "eps=" << format_double(eps) << ": " << traj.size() << " samples, max relative energy error "
                  << energy_drift(traj) << ", written " << csv.string() << '\n';
    }
    return cli::ok;
}

int cmd_section(RunConfig cfg, std::size_t count, std::size_t crossings, const std::string& branch,
                const std::string& ordering) {
    if (cfg.epsilons.empty())
        cfg.epsilons = {0.0, 0.1, 0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    cfg.extra = {{"count", count}, {"crossings", crossings}, {"branch", branch}, {"ordering", ordering}};
    cli::write_manifest(cfg);

    std::vector<Branch> branches;
    if (branch == "plus" || branch == "both")
        branches.push_back(Branch::plus);
    if (branch == "minus" || branch == "both")
        branches.push_back(Branch::minus);

    for (double eps : cfg.epsilons) {
        SectionConfig sc;
        sc.h = cfg.h;
        sc.epsilon = eps;
        sc.k = cfg.k;
        sc.seed = cfg.seed;
        sc.count = count;
        sc.max_crossings = crossings;
        sc.ordering = ordering == "positions" ? SeedOrdering::positions_first : SeedOrdering::section;
        const auto runs = section_ensemble(sc, branches);

        const std::string tag = cli::eps_tag(eps);
        const fs::path csv = out_path(cfg, "section_" + tag + ".csv");
        {
            std::ofstream os(csv, std::ios::binary);
            write_section_csv(os, runs);
        }
        std::size_t found = 0;
        {
            std::ofstream os(out_path(cfg, "section_" + tag + "_summary.csv"), std::ios::binary);
            os << "ic_index,branch,q1_0,p1_0,q2_0,p2_0,crossings,mean_radius,circle_residual\n";
            for (const auto& r : runs) {
                const auto st = radius_stats(r.points);
                found += r.points.size();
                os << r.ic_index << ',' << (r.branch == Branch::plus ? "+" : "-") << ','
                   << format_double(r.initial.q1) << ',' << format_double(r.initial.p1) << ','
                   << format_double(r.initial.q2) << ',' << format_double(r.initial.p2) << ',' << r.points.size()
                   << ',' << format_double(st.mean) << ',' << format_double(st.stddev) << '\n';
            }
        }
        if (cfg.format == "svg") {
            std::ofstream os(out_path(cfg, "section_" + tag + ".svg"), std::ios::binary);
            cli::section_svg_from_csv(csv.string(), os,
                                      "Poincare section q2 = 0, eps = " + format_double(eps) +
                                          ", h = " + format_double(cfg.h));
        }
        const double frac = static_cast<double>(found) / static_cast<double>(runs.size() * crossings);
        std::cout << "eps=" << format_double(eps) << ": " << runs.size() << " trajectories, " << found
                  << " crossings (" << 100.0 * frac << "% of requested), written " << csv.string() << '\n';
    }
    return cli::ok;
}

int cmd_normal_form(RunConfig cfg, const std::string& convention) {
    cfg.extra = {{"convention", convention}};
    cli::write_manifest(cfg);
    const auto H1 = sym::coupling_poly();
    const auto conv = convention == "half" ? sym::N2Convention::half : sym::N2Convention::printed;
    const auto h0 = sym::to_hopf(sym::h0_poly());
    const auto n1 = sym::to_hopf(sym::normal_form_order1(H1));
    const auto n2 = sym::to_hopf(sym::normal_form_order2(H1, conv));
    const auto n2_alt = sym::canonicalize(n2, sym::SyzygyOrder::rho1_rho2_reduced);

    nlohmann::json j{{"convention", convention},
                     {"H0", {{"text", sym::to_string(h0)}, {"poly", sym::to_json(h0)}}},
                     {"N1", {{"text", sym::to_string(n1)}, {"poly", sym::to_json(n1)}}},
                     {"N2", {{"text", sym::to_string(n2)}, {"poly", sym::to_json(n2)}}},
                     {"N2_rho3_rho4_form", {{"text", sym::to_string(n2_alt)}, {"poly", sym::to_json(n2_alt)}}}};
    cli::write_text(out_path(cfg, "normal_form.json"), j.dump(2) + "\n");
    if (cfg.format == "json") {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "convention: " << convention << '\n'
                  << "H0 = " << sym::to_string(h0) << '\n'
                  << "N1 = " << sym::to_string(n1) << '\n'
                  << "N2 = " << sym::to_string(n2) << '\n'
                  << "   = " << sym::to_string(n2_alt) << "  (modulo rho3^2 + rho4^2 = rho1^2 rho2)\n";
    }
    return cli::ok;
}

int cmd_reduce(RunConfig cfg) {
    if (cfg.epsilons.empty())
        cfg.epsilons = {0.01, 0.05, 0.1};
    cli::write_manifest(cfg);
    const auto crit = critical_points_N1(cfg.h);
    const auto hess = hessian_test(cfg.h);
    const auto deg = critical_points_Keps(cfg.h, cfg.epsilons);
    nlohmann::json j{{"critical_points_N1", to_json(crit)}, {"hessian", to_json(hess)}, {"K_eps", to_json(deg)}};
    cli::write_text(out_path(cfg, "reduce.json"), j.dump(2) + "\n");
    if (cfg.format == "svg") {
        std::ofstream os(out_path(cfg, "reduced_space.svg"), std::ios::binary);
        write_reduced_svg(os, crit);
    }
    if (cfg.format == "json") {
        std::cout << j.dump(2) << '\n';
        return cli::ok;
    }
    std::cout << "h = " << cfg.h << '\n';
    for (const auto& p : crit.points)
        std::cout << "  critical point (" << p.location.x << ", " << p.location.y << ", " << p.location.z
                  << "), residual " << p.residual << '\n';
    for (const auto& c : crit.circles)
        std::cout << "  critical circle z = " << c.z << ", x^2 + y^2 = " << c.radius_squared << ", residual "
                  << c.max_residual << '\n';
    std::cout << "  Hessian at (0,0,2h): det " << hess.determinant << ", eigenvalues " << hess.eigenvalues[0] << ", "
              << hess.eigenvalues[1] << ", " << hess.verdict() << " (1/(16h^2) = " << hess.reference_value
              << ", matches: " << hess.matches_reference << ")\n";
    for (const auto& a : deg.runs) {
        std::cout << "  eps = " << a.epsilon << ": min |grad K_eps| on M_h = " << a.min_gradient_norm
                  << ", axis points z =";
        for (const auto& p : a.axis_points)
            std::cout << ' ' << p.z;
        std::cout << ", reduced-field zeros " << a.field_zeros.points.size() << ", Gamma_h certificate "
                  << (a.certificate_ok ? "ok" : "violated") << '\n';
    }
    return cli::ok;
}

int cmd_orbit(RunConfig cfg, const std::string& mode, const std::string& seed_text, double period) {
    if (cfg.epsilons.empty())
        cfg.epsilons = {0.05};
    cfg.extra = {{"mode", mode}, {"seed_state", seed_text}, {"period", period}};
    cli::write_manifest(cfg);

    nlohmann::json records = nlohmann::json::array();
    std::vector<SweepRow> rows;
    for (double eps : cfg.epsilons) {
        const SystemParams params = resonant_defaults(eps);
        nlohmann::json rec{{"epsilon", eps}, {"mode", mode}};
        OrbitResult orbit;
        if (mode == "fixedpoint") {
            const auto fp = find_fixed_point(cfg.h, eps, 0.0, 2.0 * std::sqrt(cfg.h));
            rec["fixed_point"] = to_json(fp);
            orbit = shoot_periodic(params, fp.lifted, fp.period);
        } else {
            PhaseState seed;
            double T = period;
            if (mode == "normal2") {
                seed = seed_text.empty() ? PhaseState{0, 0, std::sqrt(cfg.h / 2.0), 0} : cli::parse_state(seed_text);
                T = T > 0 ? T : std::numbers::pi;
            } else if (mode == "normal1") {
                seed = seed_text.empty() ? PhaseState{std::sqrt(2.0 * cfg.h), 0, 0, 0} : cli::parse_state(seed_text);
                T = T > 0 ? T : 2.0 * std::numbers::pi;
            } else {
                if (seed_text.empty() || !(period > 0))
                    throw InvalidArgument("--mode shoot needs --seed-state and --period");
                seed = cli::parse_state(seed_text);
            }
            orbit = shoot_periodic(params, seed, T);
        }
        rec["orbit"] = to_json(orbit);
        records.push_back(rec);
        rows.push_back({eps, orbit});
        if (cfg.format != "json")
            std::cout << "eps=" << format_double(eps) << ": period " << format_double(orbit.period) << ", residual "
                      << orbit.closure_residual << ", " << to_string(orbit.stability) << ", state "
                      << orbit.initial_state << '\n';
    }
    cli::write_text(out_path(cfg, "orbit_" + mode + ".json"), records.dump(2) + "\n");
    {
        std::ofstream os(out_path(cfg, "orbit_" + mode + "_sweep.csv"), std::ios::binary);
        write_orbit_sweep_csv(os, rows);
    }
    if (cfg.format == "json")
        std::cout << records.dump(2) << '\n';
    return cli::ok;
}

int cmd_verify(RunConfig cfg, const std::vector<std::string>& only, const std::vector<std::string>& tamper) {
    acceptance::Options opts;
    cli::parse_only(only, opts);
    cli::parse_tamper(tamper, opts);
    cfg.extra = {{"only", only}, {"tamper", tamper}};
    cli::write_manifest(cfg);
    const auto results = acceptance::run(opts, cfg.format == "json" ? nullptr : &std::cout);
    const auto j = acceptance::to_json(results);
    cli::write_text(out_path(cfg, "verify.json"), j.dump(2) + "\n");
    if (cfg.format == "json")
        std::cout << j.dump(2) << '\n';
    return acceptance::all_passed(results) ? cli::ok : cli::verification_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spring-torsion oscillator with quartic coupling at 1:2 resonance: simulation, sections, normal forms, "
                 "reduction and periodic orbits"};
    app.set_config("--config", "", "TOML/INI file with option defaults (flags take precedence)");
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);

    CommonFlags sim{.h = 3.0, .epsilons = {}};
    auto* simulate = app.add_subcommand("simulate", "integrate a trajectory with velocity Verlet");
    add_common(simulate, sim, true);
    std::string ic = "1,1,1,1";
    double t_final = 100.0;
    std::size_t stride = 10;
    simulate->add_option("--ic", ic, "initial state q1,p1,q2,p2")->capture_default_str();
    simulate->add_option("--t", t_final, "final time")->capture_default_str();
    simulate->add_option("--stride", stride, "keep every n-th step")->capture_default_str();

    CommonFlags sec{.h = 3.0, .epsilons = {}};
    auto* section = app.add_subcommand("section", "Poincare section q2 = 0 on H = h");
    add_common(section, sec, false);
    std::size_t count = 10, crossings = 500;
    std::string branch = "plus", ordering = "section";
    section->add_option("--count", count, "sampled initial conditions")->capture_default_str();
    section->add_option("--crossings", crossings, "crossings per trajectory")->capture_default_str();
    section->add_option("--branch", branch, "sign of p2 at the seed: plus | minus | both")
        ->check(CLI::IsMember({"plus", "minus", "both"}))
        ->capture_default_str();
    section->add_option("--ordering", ordering, "seed slots: section (p1,q1,p2,q2) | positions (q1,p1,p2,q2)")
        ->check(CLI::IsMember({"section", "positions"}))
        ->capture_default_str();

    CommonFlags nf{.h = 1.0, .epsilons = {}};
    auto* normal_form = app.add_subcommand("normal-form", "exact normal forms N1, N2 in Hopf variables");
    add_common(normal_form, nf, false);
    std::string convention = "printed";
    normal_form->add_option("--convention", convention, "printed | half")
        ->check(CLI::IsMember({"printed", "half"}))
        ->capture_default_str();

    CommonFlags red{.h = 1.0, .epsilons = {}};
    auto* reduce = app.add_subcommand("reduce", "critical sets on the reduced space");
    add_common(reduce, red, false);

    CommonFlags orb{.h = 1.0, .epsilons = {}};
    auto* orbit = app.add_subcommand("orbit", "periodic orbits and Floquet multipliers");
    add_common(orbit, orb, false);
    std::string mode = "normal2", seed_state;
    double period = 0.0;
    orbit->add_option("--mode", mode, "normal1 | normal2 | fixedpoint | shoot")
        ->check(CLI::IsMember({"normal1", "normal2", "fixedpoint", "shoot"}))
        ->capture_default_str();
    orbit->add_option("--seed-state", seed_state, "initial guess q1,p1,q2,p2");
    orbit->add_option("--period", period, "period guess");

    CommonFlags ver{.h = 1.0, .epsilons = {}};
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    add_common(verify, ver, false);
    std::vector<std::string> only, tamper;
    verify->add_option("--only", only, "groups (symbolic, numeric, reduction, orbits) or criterion numbers")
        ->delimiter(',');
    verify->add_option("--tamper", tamper, "ID=SCALE: scale the tolerances of one criterion (self-test)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // help requests exit 0, everything else is a usage error
        const int code = app.exit(e);
        return code == 0 ? cli::ok : cli::usage_error;
    }

    try {
        if (*simulate)
            return cmd_simulate(resolve("simulate", sim), ic, t_final, stride);
        if (*section)
            return cmd_section(resolve("section", sec), count, crossings, branch, ordering);
        if (*normal_form)
            return cmd_normal_form(resolve("normal-form", nf), convention);
        if (*reduce)
            return cmd_reduce(resolve("reduce", red));
        if (*orbit)
            return cmd_orbit(resolve("orbit", orb), mode, seed_state, period);
        if (*verify)
            return cmd_verify(resolve("verify", ver), only, tamper);
    } catch (const EmptySample& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::empty_result;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::usage_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::verification_failed;
    }
    return cli::usage_error;
}
