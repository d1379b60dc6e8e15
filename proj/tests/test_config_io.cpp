#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "efimov4/config.hpp"
#include "efimov4/io.hpp"

using namespace efimov4;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}
} // namespace

TEST_CASE("parse_config: minimal config gets the documented defaults") {
    const auto cfg = parse_config("m_A = 100\nm_B = 100\n");
    CHECK(cfg.params.R0 == 10.0);
    CHECK(cfg.params.a_AB == 100.0);
    CHECK(!cfg.params.a_AA.has_value()); // infinite
    CHECK(cfg.params.beta == 1e-3);
    CHECK(cfg.params.Phi == 0.0);
    CHECK(cfg.alpha_max == 2);
    CHECK(cfg.m_max == 2);
    CHECK(cfg.n_max == 6);
    CHECK(cfg.R4_min == 10.0); // tracks R0
    CHECK(cfg.E_points == 2000);
    CHECK(!cfg.defaults_applied.empty());
}

TEST_CASE("parse_config: comments, whitespace, finite a_AA") {
    const auto cfg = parse_config(
        "# comment line\n"
        "m_A = 1   # trailing comment\n"
        "\n"
        "m_B=2\n"
        "a_AA = -500\n"
        "R0 = 5\n");
    CHECK(cfg.m_A == 1.0);
    CHECK(cfg.m_B == 2.0);
    REQUIRE(cfg.params.a_AA.has_value());
    CHECK(*cfg.params.a_AA == -500.0);
    CHECK(cfg.R4_min == 5.0);
    CHECK(cfg.a_sweep_min == 500.0);          // |a_AA| sweep defaults
    CHECK(cfg.a_sweep_max == 22.7 * 500.0);
}

TEST_CASE("parse_config: errors carry line numbers") {
    CHECK_THROWS_AS(parse_config("m_B = 1\n"), validation_error); // missing m_A
    try {
        parse_config("m_A = 1\nm_B = 1\nbogus_key = 3\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
    try {
        parse_config("m_A = 1\nm_A = 2\nm_B = 1\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 2); // duplicate key
    }
    try {
        parse_config("m_A = 1\nm_B = abc\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 2); // malformed number
    }
    CHECK_THROWS_AS(parse_config("m_A = 1\nm_B = 1\na_AA = 300\n"), validation_error);
    CHECK_THROWS_AS(parse_config("m_A = 1\nm_B = 1\nE_points = 1\n"), validation_error);
    CHECK_THROWS_AS(parse_config("m_A = 1\nm_B = 1\nR4_min = 9\nR4_max = 3\n"), validation_error);
}

TEST_CASE("config round-trips losslessly") {
    const auto cfg = parse_config(
        "m_A = 86.9091835\nm_B = 6.0151228\nR0 = 10\na_AB = 150\na_AA = -1234.5\n"
        "beta = 2e-3\nPhi = 0.125\nn_max = 4\nE_min = 1e-11\nE_max = 0.5\n");
    const auto again = parse_config(serialize_config(cfg));
    CHECK(again == cfg);
    // and once more through the canonical form
    CHECK(serialize_config(again) == serialize_config(cfg));
}

TEST_CASE("fmt_sci: 12 significant digits, scientific") {
    CHECK(fmt_sci(1.0) == "1.00000000000e+00");
    CHECK(fmt_sci(-0.000123456789012345) == "-1.23456789012e-04");
}

TEST_CASE("run_subcommand: constants emits the universal numbers") {
    const auto cfg = parse_config("m_A = 100\nm_B = 100\n");
    RunOptions opt;
    opt.out_dir = (fs::temp_directory_path() / "efimov4_test_constants").string();
    fs::remove_all(opt.out_dir);
    std::ostringstream out, log;
    const int rc = run_subcommand("constants", cfg, opt, out, log);
    CHECK(rc == 0);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(std::fabs(j["s0"].get<double>() - 1.0062) < 5e-4);
    CHECK(j["s_alpha"].size() == 2);
    CHECK(fs::exists(fs::path(opt.out_dir) / "constants.json"));
    const auto meta = nlohmann::json::parse(slurp(fs::path(opt.out_dir) / "constants_meta.json"));
    CHECK(meta["subcommand"] == "constants");
    CHECK(meta["config"]["m_A"] == 100.0);
    fs::remove_all(opt.out_dir);
}

TEST_CASE("run_subcommand: spectrum is deterministic and windows annotated") {
    const auto cfg = parse_config("m_A = 100\nm_B = 100\nE_points = 120\n");
    RunOptions opt;
    std::ostringstream out, log;
    const auto base = fs::temp_directory_path() / "efimov4_test_spectrum";
    fs::remove_all(base);
    opt.out_dir = (base / "a").string();
    REQUIRE(run_subcommand("spectrum", cfg, opt, out, log) == 0);
    opt.out_dir = (base / "b").string();
    REQUIRE(run_subcommand("spectrum", cfg, opt, out, log) == 0);
    CHECK(slurp(base / "a" / "spectrum.csv") == slurp(base / "b" / "spectrum.csv"));
    const auto meta = nlohmann::json::parse(slurp(base / "a" / "spectrum_meta.json"));
    CHECK(meta["derived"]["E_window_hi"].get<double>() > 0);
    CHECK(meta["derived"].contains("peaks"));
    fs::remove_all(base);
}

TEST_CASE("run_subcommand: threshold refuses infinite a_AA, exit code 1") {
    const auto cfg = parse_config("m_A = 100\nm_B = 100\n"); // a_AA = inf
    RunOptions opt;
    opt.out_dir = (fs::temp_directory_path() / "efimov4_test_thr").string();
    std::ostringstream out, log;
    CHECK(run_subcommand("threshold", cfg, opt, out, log) == 1);
    CHECK(log.str().find("error") != std::string::npos);
    fs::remove_all(opt.out_dir);
}

TEST_CASE("run_subcommand: potentials rejects an R4 range inside the core") {
    const auto cfg = parse_config("m_A = 100\nm_B = 100\nR4_min = 5\nR4_points = 2\n");
    RunOptions opt;
    opt.out_dir = (fs::temp_directory_path() / "efimov4_test_pot").string();
    std::ostringstream out, log;
    CHECK(run_subcommand("potentials", cfg, opt, out, log) == 1);
    CHECK(log.str().find("core") != std::string::npos);
    fs::remove_all(opt.out_dir);
}

TEST_CASE("run_subcommand: numeric-crossing route for peaks and spectrum") {
    // restricted channel set keeps the W-curve root searches quick
    const auto cfg = parse_config("m_A = 1\nm_B = 1\nalpha_max = 1\nm_max = 0\nn_max = 3\n"
                                  "E_points = 300\n");
    RunOptions opt;
    opt.numeric_crossings = true;
    const auto base = fs::temp_directory_path() / "efimov4_test_numx";
    fs::remove_all(base);
    opt.out_dir = base.string();
    std::ostringstream out, log;
    REQUIRE(run_subcommand("peaks", cfg, opt, out, log) == 0);
    std::istringstream csv(slurp(base / "peaks.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "alpha,m,n,R4c,lambda_c,E_peak_formula,E_peak_numeric");
    int rows = 0, numeric_filled = 0;
    while (std::getline(csv, line)) {
        ++rows;
        // n = 1,2 have no crossing: trailing column stays empty
        const auto last = line.rfind(',');
        if (last + 1 < line.size()) {
            ++numeric_filled;
            CHECK(std::atof(line.substr(last + 1).c_str()) > 0);
        }
    }
    CHECK(rows == 3);
    CHECK(numeric_filled == 1); // only n = 3 crosses

    REQUIRE(run_subcommand("spectrum", cfg, opt, out, log) == 0);
    const auto meta = nlohmann::json::parse(slurp(base / "spectrum_meta.json"));
    REQUIRE(meta["derived"]["peaks"].size() == 1);
    CHECK(meta["derived"]["peaks"][0]["n"] == 3);
    CHECK(meta["derived"]["peaks"][0]["W_c"].get<double>() > 0);
    fs::remove_all(base);
}

TEST_CASE("run_subcommand: threshold sweep CSV contract") {
    const auto cfg = parse_config(
        "m_A = 100\nm_B = 100\na_AA = -300\na_sweep_points = 40\nthreshold_n = 1\n");
    RunOptions opt;
    opt.out_dir = (fs::temp_directory_path() / "efimov4_test_thr2").string();
    fs::remove_all(opt.out_dir);
    std::ostringstream out, log;
    REQUIRE(run_subcommand("threshold", cfg, opt, out, log) == 0);
    std::istringstream csv(slurp(fs::path(opt.out_dir) / "threshold.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "a_AA,k,P,K4,oscillation_index");
    int rows = 0;
    double prev_K4 = -1;
    (void)prev_K4;
    while (std::getline(csv, line)) {
        ++rows;
        double a, k, P, K4;
        int osc;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &a, &k, &P, &K4, &osc) == 5);
        CHECK(a < 0);
        CHECK(k > 0);
        CHECK(P >= 0);
        CHECK(osc >= 0);
    }
    CHECK(rows == 40);
    fs::remove_all(opt.out_dir);
}
