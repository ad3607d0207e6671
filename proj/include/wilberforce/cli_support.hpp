#pragma once

// Pieces of the command-line tool that are worth testing on their own:
// argument parsing helpers, the run manifest and the CSV -> SVG renderers.

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "acceptance.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "svg.hpp"

namespace wilberforce::cli {

enum ExitCode { ok = 0, verification_failed = 1, usage_error = 2, empty_result = 3 };

/// Resolved settings of one invocation, echoed into run-manifest.json.
struct RunConfig {
    std::string subcommand;
    SystemParams params = resonant_defaults();
    double h = 3.0;
    std::vector<double> epsilons;
    std::uint64_t seed = 12345;
    double k = 1e-3;
    std::string out = "out";
    std::string format = "svg";
    nlohmann::json extra = nlohmann::json::object();

    nlohmann::json to_json() const {
        return {{"subcommand", subcommand},
                {"params", {{"m", params.m}, {"I", params.I}, {"omega1", params.omega1}, {"omega2", params.omega2}}},
                {"h", h},
                {"epsilon", epsilons},
                {"seed", seed},
                {"k", k},
                {"out", out},
                {"format", format},
                {"options", extra}};
    }
};

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

/// "q1,p1,q2,p2" -> PhaseState.
inline PhaseState parse_state(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4)
        throw InvalidArgument("a state needs four comma-separated numbers q1,p1,q2,p2: '" + text + "'");
    return {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2]), parse_double(parts[3])};
}

/// `--only` values: group names (symbolic, numeric, reduction, orbits) or criterion numbers.
inline void parse_only(const std::vector<std::string>& items, acceptance::Options& opts) {
    for (const auto& item : items) {
        if (item == "symbolic")
            opts.groups.insert(acceptance::Group::symbolic);
        else if (item == "numeric")
            opts.groups.insert(acceptance::Group::numeric);
        else if (item == "reduction")
            opts.groups.insert(acceptance::Group::reduction);
        else if (item == "orbits")
            opts.groups.insert(acceptance::Group::orbits);
        else {
            const double v = parse_double(item);
            if (v != static_cast<int>(v) || v < 1 || v > 12)
                throw InvalidArgument("unknown --only value '" + item + "'");
            opts.ids.insert(static_cast<int>(v));
        }
    }
}

/// `--tamper ID=SCALE` multiplies the tolerances of criterion ID by SCALE.
inline void parse_tamper(const std::vector<std::string>& items, acceptance::Options& opts) {
    for (const auto& item : items) {
        const auto parts = split(item, '=');
        if (parts.size() != 2)
            throw InvalidArgument("--tamper expects ID=SCALE, got '" + item + "'");
        opts.tolerance_scale[static_cast<int>(parse_double(parts[0]))] = parse_double(parts[1]);
    }
}

inline std::string eps_tag(double eps) { return "eps" + format_double(eps); }

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot write " + path.string());
    os << content;
}

inline void write_manifest(const RunConfig& cfg) {
    write_text(std::filesystem::path(cfg.out) / "run-manifest.json", cfg.to_json().dump(2) + "\n");
}

/// q1 (horizontal) against q2 (vertical) from a trajectory CSV.
inline void trajectory_svg_from_csv(const std::string& csv_path, std::ostream& os, const std::string& title) {
    const CsvTable t = read_csv(csv_path);
    svg::Plot plot;
    plot.title = title;
    plot.x_label = "q1";
    plot.y_label = "q2";
    svg::Series s;
    s.polyline = true;
    s.x = t.numeric_column("q1");
    s.y = t.numeric_column("q2");
    plot.series.push_back(std::move(s));
    svg::write(os, plot);
}

/// Section points, q1 horizontal and p1 vertical, colored by the sign of p2.
inline void section_svg_from_csv(const std::string& csv_path, std::ostream& os, const std::string& title) {
    const CsvTable t = read_csv(csv_path);
    const auto q1 = t.numeric_column("q1");
    const auto p1 = t.numeric_column("p1");
    const auto sign = t.numeric_column("p2_sign");
    svg::Series plus, minus;
    plus.color = "#1f77b4";
    minus.color = "#ff7f0e";
    for (std::size_t i = 0; i < q1.size(); ++i) {
        auto& s = sign[i] >= 0 ? plus : minus;
        s.x.push_back(q1[i]);
        s.y.push_back(p1[i]);
    }
    svg::Plot plot;
    plot.title = title;
    plot.x_label = "q1";
    plot.y_label = "p1";
    plot.series = {plus, minus};
    svg::write(os, plot);
}

} // namespace wilberforce::cli
