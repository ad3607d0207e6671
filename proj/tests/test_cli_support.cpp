#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <wilberforce/cli_support.hpp>
#include <wilberforce/integrators.hpp>

using namespace wilberforce;
namespace fs = std::filesystem;

TEST(ParseState, ValidAndInvalid) {
    EXPECT_EQ(cli::parse_state("1,-2.5,0,3e-1"), (PhaseState{1, -2.5, 0, 0.3}));
    EXPECT_THROW(cli::parse_state("1,2,3"), InvalidArgument);
    EXPECT_THROW(cli::parse_state("1,2,x,4"), InvalidArgument);
}

TEST(ParseOnly, GroupsAndIds) {
    acceptance::Options opts;
    cli::parse_only({"symbolic", "9"}, opts);
    EXPECT_EQ(opts.groups.count(acceptance::Group::symbolic), 1u);
    EXPECT_EQ(opts.ids.count(9), 1u);
    EXPECT_THROW(cli::parse_only({"13"}, opts), InvalidArgument);
    EXPECT_THROW(cli::parse_only({"bogus"}, opts), InvalidArgument);
}

TEST(ParseTamper, ScalesOneCriterion) {
    acceptance::Options opts;
    cli::parse_tamper({"4=1e-30"}, opts);
    EXPECT_DOUBLE_EQ(opts.tolerance_scale.at(4), 1e-30);
    EXPECT_THROW(cli::parse_tamper({"4"}, opts), InvalidArgument);
}

// Shrinking a passing criterion's tolerance to nothing must flip it to FAIL.
TEST(Verify, TamperHookFlipsAPassingCriterion) {
    acceptance::Options clean;
    clean.ids = {5};
    const auto ok = acceptance::run(clean);
    ASSERT_EQ(ok.size(), 1u);
    EXPECT_TRUE(ok[0].passed);
    acceptance::Options tampered = clean;
    cli::parse_tamper({"5=1e-30"}, tampered);
    const auto bad = acceptance::run(tampered);
    EXPECT_FALSE(bad[0].passed);
    EXPECT_FALSE(acceptance::all_passed(bad));
}

TEST(Verify, SymbolicGroupIsFast) {
    acceptance::Options opts;
    opts.groups = {acceptance::Group::symbolic};
    const auto t0 = std::chrono::steady_clock::now();
    const auto rs = acceptance::run(opts);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
    EXPECT_EQ(rs.size(), 4u);
}

TEST(Manifest, EchoesResolvedValues) {
    const fs::path dir = fs::temp_directory_path() / "wilberforce_manifest_test";
    fs::create_directories(dir);
    cli::RunConfig cfg;
    cfg.subcommand = "section";
    cfg.h = 3;
    cfg.epsilons = {0.1, 0.5};
    cfg.out = dir.string();
    cli::write_manifest(cfg);
    std::ifstream is(dir / "run-manifest.json");
    const auto j = nlohmann::json::parse(is);
    EXPECT_EQ(j.at("subcommand"), "section");
    EXPECT_EQ(j.at("epsilon").size(), 2u);
    EXPECT_DOUBLE_EQ(j.at("h").get<double>(), 3.0);
    fs::remove_all(dir);
}

// SVGs are rendered from the CSV alone: same CSV, same picture.
TEST(Svg, RenderedFromCsvDeterministically) {
    const fs::path dir = fs::temp_directory_path() / "wilberforce_svg_test";
    fs::create_directories(dir);
    const auto csv = dir / "traj.csv";
    {
        std::ofstream os(csv);
        write_trajectory_csv(os, integrate(resonant_defaults(0.2), {1, 1, 1, 1}, {1e-2, Method::verlet, 5, 5}));
    }
    std::ostringstream a, b;
    cli::trajectory_svg_from_csv(csv.string(), a, "t");
    cli::trajectory_svg_from_csv(csv.string(), b, "t");
    EXPECT_EQ(a.str(), b.str());
    EXPECT_NE(a.str().find("<svg"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Csv, RoundTripPreservesDoubles) {
    const fs::path dir = fs::temp_directory_path() / "wilberforce_csv_test";
    fs::create_directories(dir);
    const auto traj = integrate(resonant_defaults(0.2), {1, 1, 1, 1}, {1e-2, Method::verlet, 1, 1});
    {
        std::ofstream os(dir / "t.csv");
        write_trajectory_csv(os, traj);
    }
    const auto t = read_csv((dir / "t.csv").string());
    const auto q1 = t.numeric_column("q1");
    ASSERT_EQ(q1.size(), traj.size());
    for (std::size_t i = 0; i < q1.size(); ++i)
        EXPECT_EQ(q1[i], traj.states[i].q1);
    fs::remove_all(dir);
}
