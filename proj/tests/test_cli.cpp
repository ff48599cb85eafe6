#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "m2hs/cli.hpp"
#include "m2hs/report.hpp"

using namespace m2hs;
using namespace m2hs::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("m2hs_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(M2HS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string small_config(const fs::path& outdir, double s = 0.5,
                         const std::string& extra = "") {
    std::string cfg = R"({
      "grid": {"n": 64},
      "magnetic_strength": )" + report::format_double(s) + R"(,
      "initial_data": {"profile": "random", "seed": 5, "rho_mean": 0.7},
      "time": {"start": 0.0, "end": 0.4, "samples": 5},
      "output_dir": ")" + outdir.string() + R"(")" + extra + "\n}";
    return cfg;
}

}  // namespace

TEST_CASE("config: defaults, unknown keys, type errors") {
    const ScenarioConfig cfg = parse_config_text("{}");
    CHECK(cfg.n == 256);
    CHECK(cfg.tau_variant == TauVariant::OdeConsistent);

    CHECK_THROWS_AS(parse_config_text(R"({"grids": {"n": 64}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"grid": {"m": 64}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"grid": {"n": "64"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"grid": {"n": 13}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"grid": 64})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"tau": {"variant": "bogus"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"tau": {"variant": 3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"output_dir": []})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigError);
}

TEST_CASE("scenario: random profile is reproducible and normalized") {
    ScenarioConfig cfg = parse_config_text(R"({
      "grid": {"n": 128},
      "magnetic_strength": 1.0,
      "initial_data": {"profile": "random", "seed": 11, "rho_mean": 0.6, "blowup_site": true}
    })");
    const Scenario a = build_scenario(cfg);
    const Scenario b = build_scenario(cfg);
    CHECK(a.data.rho0 == b.data.rho0);
    CHECK(a.site_index >= 0);
    CHECK(a.data.rho0[a.site_index] == 1.0);
    CHECK(std::abs(a.params.c2 - 1.0) <= 1e-12);
}

TEST_CASE("cmd_simulate: artifacts, exit code, schema") {
    const fs::path dir = fresh_dir("simulate");
    const std::string cfg_path = (dir / "config.json").string();
    report::write_text_file(cfg_path, small_config(dir / "out"));

    CHECK(run_cli("simulate " + cfg_path) == 0);
    CHECK(fs::exists(dir / "out" / "states.csv"));
    CHECK(fs::exists(dir / "out" / "conservation.csv"));
    CHECK(fs::exists(dir / "out" / "summary.json"));

    const std::string cons = slurp(dir / "out" / "conservation.csv");
    CHECK(cons.rfind("t,energy,angle,degenerate_flag\n", 0) == 0);
    // 5 sample rows plus the header
    CHECK(std::count(cons.begin(), cons.end(), '\n') == 6);

    const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary["params"]["n"] == 64);
    CHECK(summary["deviations"]["max_energy_relaxed_dev"].get<double>() <= 1e-6);
    CHECK(summary["deviations"]["max_angle_pullback_dev"].get<double>() <= 1e-6);

    // states.csv carries 17-significant-digit values that round-trip
    std::ifstream states(dir / "out" / "states.csv");
    std::string header, line;
    std::getline(states, header);
    CHECK(header == "t,x,u,u_x,rho");
    std::getline(states, line);
    const auto comma = line.find(',', line.find(',') + 1);
    const std::string u_field = line.substr(comma + 1, line.find(',', comma + 1) - comma - 1);
    const double parsed = std::strtod(u_field.c_str(), nullptr);
    CHECK(report::format_double(parsed) == u_field);
}

TEST_CASE("cmd_simulate: degenerate frequencies exit with code 3") {
    // rho == 2 constant with s = 2 collapses the frequency pair exactly
    const fs::path dir = fresh_dir("degenerate");
    const std::string cfg = R"({
      "grid": {"n": 64},
      "magnetic_strength": 2.0,
      "initial_data": {"profile": "modes", "rho_mean": 2.0},
      "output_dir": ")" + (dir / "out").string() + R"("
    })";
    const std::string cfg_path = (dir / "config.json").string();
    report::write_text_file(cfg_path, cfg);
    CHECK(run_cli("simulate " + cfg_path) == 3);
}

TEST_CASE("cli: usage and config errors exit with code 2") {
    CHECK(run_cli("simulate") == 2);
    CHECK(run_cli("bogus /nonexistent.json") == 2);
    CHECK(run_cli("simulate /nonexistent.json") == 2);

    const fs::path dir = fresh_dir("badcfg");
    const std::string cfg_path = (dir / "config.json").string();
    report::write_text_file(cfg_path, R"({"grid": {"n": 64}, "unknown_key": 1})");
    CHECK(run_cli("simulate " + cfg_path) == 2);
}

TEST_CASE("cmd_blowup: sweep table with sites vanishing beyond max rho0") {
    const fs::path dir = fresh_dir("blowup");
    const std::string cfg = R"({
      "grid": {"n": 64},
      "magnetic_strength": 1.0,
      "initial_data": {"profile": "random", "seed": 3, "rho_mean": 0.7, "blowup_site": true},
      "blowup": {"s_values": [1.0, 2.5, 3.0, 3.5], "horizon": 3.0},
      "output_dir": ")" + (dir / "out").string() + R"("
    })";
    const std::string cfg_path = (dir / "config.json").string();
    report::write_text_file(cfg_path, cfg);
    CHECK(run_cli("blowup " + cfg_path) == 0);

    const std::string csv = slurp(dir / "out" / "blowup.csv");
    CHECK(csv.rfind("s,sites,t_first,margin,beyond_max_rho0,status\n", 0) == 0);
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);  // header
    std::getline(ss, line);
    CHECK(line.find(",ok") != std::string::npos);
    CHECK(line[0] == '1');  // s = 1 row: the seeded site
    const auto c1 = line.find(',');
    const std::string sites_field = line.substr(c1 + 1, line.find(',', c1 + 1) - c1 - 1);
    CHECK(std::atoi(sites_field.c_str()) >= 1);
    // rows far beyond max rho0 report zero sites and the flag
    while (std::getline(ss, line))
        if (line.rfind("3.5,", 0) == 0) {
            CHECK(line.find("3.5,0,inf,") == 0);
            CHECK(line.find(",1,ok") != std::string::npos);
        }
}

TEST_CASE("cmd_blowup: degenerate sweep values become error rows") {
    // rho == 2 after normalization has delta = 1, so the swept s = 2
    // degenerates while the scenario itself (s = 0) stays valid
    const fs::path dir = fresh_dir("blowup_degenerate");
    const std::string cfg = R"({
      "grid": {"n": 64},
      "magnetic_strength": 0.0,
      "initial_data": {"profile": "modes", "rho_mean": 2.0},
      "blowup": {"s_values": [1.0, 2.0, 3.0], "horizon": 2.0},
      "output_dir": ")" + (dir / "out").string() + R"("
    })";
    const std::string cfg_path = (dir / "config.json").string();
    report::write_text_file(cfg_path, cfg);
    CHECK(run_cli("blowup " + cfg_path) == 0);

    std::stringstream ss(slurp(dir / "out" / "blowup.csv"));
    std::string line;
    std::getline(ss, line);  // header
    std::getline(ss, line);
    CHECK(line.find(",ok") != std::string::npos);
    std::getline(ss, line);
    CHECK(line == "2,,,,,degenerate");
    std::getline(ss, line);
    CHECK(line.find(",ok") != std::string::npos);
}

TEST_CASE("cmd_blowup: duplicate s values produce identical rows") {
    const fs::path dir = fresh_dir("blowup_dup");
    const std::string cfg = R"({
      "grid": {"n": 64},
      "magnetic_strength": 1.0,
      "initial_data": {"profile": "random", "seed": 3, "rho_mean": 0.7},
      "blowup": {"s_values": [0.8, 0.8], "horizon": 2.0},
      "output_dir": ")" + (dir / "out").string() + R"("
    })";
    const std::string cfg_path = (dir / "config.json").string();
    report::write_text_file(cfg_path, cfg);
    CHECK(run_cli("blowup " + cfg_path) == 0);
    std::stringstream ss(slurp(dir / "out" / "blowup.csv"));
    std::string header, r1, r2;
    std::getline(ss, header);
    std::getline(ss, r1);
    std::getline(ss, r2);
    CHECK(r1 == r2);
}

TEST_CASE("determinism: byte-identical artifacts across thread counts") {
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    const std::string c1 = (d1 / "config.json").string();
    const std::string c2 = (d2 / "config.json").string();
    report::write_text_file(c1, small_config(d1 / "out", 1.0));
    report::write_text_file(c2, small_config(d2 / "out", 1.0));

    const std::string base = std::string(M2HS_CLI_PATH);
    REQUIRE(std::system(("OMP_NUM_THREADS=1 " + base + " simulate " + c1 + " >/dev/null").c_str()) == 0);
    REQUIRE(std::system(("OMP_NUM_THREADS=3 " + base + " simulate " + c2 + " >/dev/null").c_str()) == 0);

    for (const char* f : {"states.csv", "conservation.csv", "summary.json"})
        CHECK(slurp(d1 / "out" / f) == slurp(d2 / "out" / f));
}

TEST_CASE("cmd_simulate: stationary constant-density configuration") {
    // rho == 2, u == 0, s = 0: the flow map stays the identity and the
    // energy column is pinned at 1
    const fs::path dir = fresh_dir("stationary");
    const std::string cfg = R"({
      "grid": {"n": 64},
      "magnetic_strength": 0.0,
      "initial_data": {"profile": "modes", "rho_mean": 2.0},
      "time": {"start": 0.0, "end": 1.5, "samples": 7},
      "output_dir": ")" + (dir / "out").string() + R"("
    })";
    const std::string cfg_path = (dir / "config.json").string();
    report::write_text_file(cfg_path, cfg);
    REQUIRE(run_cli("simulate " + cfg_path) == 0);

    std::stringstream ss(slurp(dir / "out" / "conservation.csv"));
    std::string line;
    std::getline(ss, line);  // header
    while (std::getline(ss, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double e = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
        CHECK(std::abs(e - 1.0) <= 1e-6);
    }
}

TEST_CASE("cmd_validate: corrupted theta2 hook trips the sphere ODE residual") {
    const fs::path dir = fresh_dir("corrupt");
    const std::string cfg = R"({
      "grid": {"n": 128},
      "magnetic_strength": 1.0,
      "initial_data": {"profile": "random", "seed": 2, "rho_mean": 1.0},
      "time": {"start": 0.0, "end": 1.0, "samples": 40},
      "validate": {"corrupt_theta2": 1e-3, "warn_only": true},
      "output_dir": ")" + (dir / "out").string() + R"("
    })";
    const std::string cfg_path = (dir / "config.json").string();
    report::write_text_file(cfg_path, cfg);
    CHECK(run_cli("validate " + cfg_path) == 0);  // warn-only

    const auto j = nlohmann::json::parse(slurp(dir / "out" / "validation.json"));
    bool found = false;
    for (const auto& c : j["checks"])
        if (c["name"] == "weakflow_sphere_ode_residual") {
            found = true;
            CHECK_FALSE(c["pass"].get<bool>());
        }
    CHECK(found);
    CHECK_FALSE(j["overall_pass"].get<bool>());
}

TEST_CASE("format_double: 17 significant digits round-trip") {
    for (double v : {1.0 / 3.0, 0.1, 1e-300, 123456.789012345678, -2.2250738585072014e-308}) {
        const std::string s = report::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}
