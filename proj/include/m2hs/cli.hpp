#pragma once

#include <string>
#include <vector>

#include "m2hs/core.hpp"
#include "m2hs/types.hpp"

namespace m2hs::cli {

// Parsed and validated scenario configuration.  Unknown keys anywhere in the
// file are rejected.
struct ScenarioConfig {
    int n = 256;
    double s = 0.0;

    std::string profile = "modes";  // "modes" | "random"
    std::vector<Mode> u_modes, rho_modes;
    double rho_mean = 0.0;
    unsigned long long seed = 1;
    int u_mode_count = 3, rho_mode_count = 3;
    bool normalize = true;
    bool blowup_site = false;
    int blowup_site_index = -1;  // -1: seed at the grid minimum of u0x

    TauVariant tau_variant = TauVariant::OdeConsistent;
    double dt_tau = 1e-4;

    double t_start = 0.0, t_end = 2.0;
    int samples = 41;

    double eps_phi_x = 1e-10;
    double rho_tol = 1e-9;
    double dt_fd = 1e-4;
    double conservation_window = 1e-3;

    std::string output_dir = "out";

    std::vector<double> s_values;  // blowup subcommand
    double horizon = 10.0;

    bool warn_only = false;        // validate subcommand
    double corrupt_theta2 = 0.0;   // fault-injection hook for the validation suite
};

ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

// Scenario instantiation: resolved mode lists plus two data sets.  The
// unseeded fields keep the band-limited profile (used for refinement and
// reference-resolution checks); the seeded fields carry the pointwise
// blow-up correction when requested.
struct Scenario {
    ScenarioConfig cfg;
    std::vector<Mode> u_modes, rho_modes;
    double rho_mean = 0.0;
    InitialData data;           // final data for the run
    InitialData data_unseeded;  // same profile without the pointwise correction
    SimParams params;
    int site_index = -1;
};

Scenario build_scenario(const ScenarioConfig& cfg);

// Same profile synthesized at a different resolution (always unseeded).
InitialData synth_unseeded(const Scenario& sc, int n);

// Exit codes: 0 success, 1 validation failure, 2 config error,
// 3 degenerate frequencies.
int cmd_simulate(const ScenarioConfig& cfg);
int cmd_blowup(const ScenarioConfig& cfg);
int cmd_validate(const ScenarioConfig& cfg);

// Entry point used by the binary: dispatches on the subcommand and maps
// exceptions to the exit codes above.
int run(int argc, const char* const* argv);

}  // namespace m2hs::cli
