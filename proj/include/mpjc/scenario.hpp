#pragma once

#include <string>
#include <vector>

#include "mpjc/lindblad.hpp"
#include "mpjc/version.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Scenario runner
// ------------------------------------------------------------------
//
// One scenario = one config = one CSV data file plus one JSON manifest
// describing its columns, the engine paths taken, and the tolerances in
// force. Configs are plain "key = value" text with an explicit schema
// version so result directories stay diffable; serialization is lossless
// (doubles round-trip bit-exactly) and reruns of the same config produce
// byte-identical CSVs.

struct ScenarioConfig {
    int schema = config_schema_version;
    std::string kind = "evolve";  // evolve | negativity | phi-scan |
                                  // transfer-scan | detuning-scan |
                                  // decoherence | symmetry-check | beamsplitter
    ModelParams params;
    std::string engine = "auto";  // numeric | analytic | auto

    // Time grid (evolve, negativity, phi-scan, detuning-scan, decoherence).
    double t_min = 0.0;
    double t_max = 10.0;
    int t_steps = 101;

    // Which oscillator's reduced state to analyze.
    int oscillator = 1;

    // Negativity-volume quadrature tolerance.
    double wigner_tol = 1e-6;

    // phi-scan grid.
    double phi_min = 0.0;
    double phi_max = 1.5707963267948966;
    int phi_steps = 17;

    // transfer-scan grid: n1 = 0..n1_max, m = 1..m_max.
    int n1_max = 3;
    int m_max = 3;

    // detuning-scan grid.
    double delta_min = 0.0;
    double delta_max = 2.0;
    int delta_steps = 5;

    // beamsplitter grid.
    double theta_min = 0.0;
    double theta_max = 1.5707963267948966;
    int theta_steps = 65;

    // symmetry-check truncation; -1 resolves to 3m + 3.
    int sym_cutoff = -1;

    // Open-system settings (decoherence).
    LindbladConfig lindblad;

    // Output path prefix; empty means the scenario kind. A relative prefix
    // is placed under $MPJC_OUT_DIR when that variable is set.
    std::string output;

    // Structural validation beyond field parsing (ranges, grid sanity).
    void validate() const;
};

// Parse "key = value" config text ('#' comments, blank lines allowed).
// Unknown or duplicate keys and malformed values raise config_error.
ScenarioConfig parse_config_text(const std::string& text);

// Read and parse a config file (io_error if unreadable).
ScenarioConfig load_config_file(const std::string& path);

// Serialize every field in a fixed order; parse(serialize(c)) == c exactly.
std::string serialize_config(const ScenarioConfig& cfg);

// Assign one field by its config-file key, with config-file validation.
// Lets the CLI route flag values through the same code path as files.
void set_config_key(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value);

// All config keys in serialization order.
std::vector<std::string> config_keys();

struct ScenarioResult {
    std::string csv_path;
    std::string manifest_path;
    long rows = 0;
    bool leak_warning = false;
    double wall_time_ms = 0.0;
};

// Run one scenario and write its CSV + manifest. Paths are resolved from
// cfg.output and $MPJC_OUT_DIR; parent directories are created on demand.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace mpjc
