// mpjc: scenario runner for the tripartite multiphoton Jaynes-Cummings
// engine. Every run writes one CSV data file plus one JSON manifest; all
// failures exit nonzero with a machine-readable JSON object on stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpjc/scenario.hpp"
#include "mpjc/version.hpp"

namespace {

using nlohmann::json;

struct FlagSpec {
    const char* key;   // config-file key
    const char* flag;  // CLI long option
    const char* desc;
};

// Every ScenarioConfig field except `kind` (chosen by the subcommand).
const FlagSpec kFlags[] = {
    {"schema", "--schema", "config schema version (currently 1)"},
    {"engine", "--engine", "dynamics engine: numeric | analytic | auto"},
    {"n1", "--n1", "initial photons in oscillator 1"},
    {"n2", "--n2", "initial photons in oscillator 2"},
    {"m", "--m", "photons exchanged per qubit flip"},
    {"g1", "--g1", "oscillator-1 coupling"},
    {"g2", "--g2", "oscillator-2 coupling"},
    {"delta", "--delta", "qubit detuning"},
    {"phi", "--phi", "initial superposition angle"},
    {"t_min", "--t-min", "time grid start"},
    {"t_max", "--t-max", "time grid end"},
    {"t_steps", "--t-steps", "number of time samples"},
    {"oscillator", "--oscillator", "reduced oscillator to analyze (1 or 2)"},
    {"wigner_tol", "--wigner-tol", "negativity quadrature tolerance"},
    {"phi_min", "--phi-min", "phi-scan start"},
    {"phi_max", "--phi-max", "phi-scan end"},
    {"phi_steps", "--phi-steps", "phi-scan samples"},
    {"n1_max", "--n1-max", "transfer-scan n1 range (0..n1_max)"},
    {"m_max", "--m-max", "transfer-scan m range (1..m_max)"},
    {"delta_min", "--delta-min", "detuning-scan start"},
    {"delta_max", "--delta-max", "detuning-scan end"},
    {"delta_steps", "--delta-steps", "detuning-scan samples"},
    {"theta_min", "--theta-min", "beamsplitter angle start"},
    {"theta_max", "--theta-max", "beamsplitter angle end"},
    {"theta_steps", "--theta-steps", "beamsplitter angle samples"},
    {"sym_cutoff", "--sym-cutoff",
     "symmetry-check Fock truncation (-1 = auto)"},
    {"lambda_r", "--lambda-r", "relaxation-rate prefactor"},
    {"nbar", "--nbar", "thermal occupation of the environment"},
    {"lambda_d", "--lambda-d", "dephasing-rate prefactor"},
    {"lind_cutoff", "--lind-cutoff",
     "open-system Fock truncation (-1 = auto)"},
    {"lind_strict", "--lind-strict",
     "true: fail (exit 4) on truncation leakage"},
    {"lind_rtol", "--lind-rtol", "integrator relative tolerance"},
    {"lind_atol", "--lind-atol", "integrator absolute tolerance"},
    {"leak_tol", "--leak-tol", "admissible truncation-edge population"},
    {"trace_tol", "--trace-tol", "trace drift treated as integrator failure"},
    {"output", "-o,--output", "output path prefix (writes .csv and "
                              ".manifest.json); honors $MPJC_OUT_DIR"},
};

struct SubcommandSpec {
    const char* name;
    const char* desc;
};

const SubcommandSpec kSubcommands[] = {
    {"evolve", "unitary ladder amplitudes over a time grid"},
    {"negativity", "Wigner negativity volume of a reduced oscillator"},
    {"phi-scan", "max-over-time negativity as a function of phi"},
    {"transfer-scan", "swap amplitude A over an (n1, m) grid"},
    {"detuning-scan", "negativity traces for a range of detunings"},
    {"decoherence", "open-system negativity under damping and dephasing"},
    {"symmetry-check", "constant-of-motion and normal-mode diagnostics"},
    {"beamsplitter", "Fock-state beamsplitter output distribution"},
};

int report_error(const char* kind, int exit_code, const std::string& message) {
    const json err = {{"error",
                       {{"exit_code", exit_code},
                        {"kind", kind},
                        {"message", message}}}};
    std::cerr << err.dump() << "\n";
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tripartite multiphoton Jaynes-Cummings scenario runner"};
    app.set_version_flag("--version", mpjc::engine_version);
    app.require_subcommand(0, 1);

    std::map<std::string, std::string> staged;
    std::string config_path;
    std::string save_config_path;
    bool print_config = false;

    std::map<CLI::App*, std::map<std::string, CLI::Option*>> options;
    for (const SubcommandSpec& sc : kSubcommands) {
        CLI::App* sub = app.add_subcommand(sc.name, sc.desc);
        sub->option_defaults()->take_last();
        for (const FlagSpec& f : kFlags)
            options[sub][f.key] = sub->add_option(f.flag, staged[f.key], f.desc);
        sub->add_option("--config", config_path,
                        "config file to load before applying flags");
        sub->add_option("--save-config", save_config_path,
                        "also write the effective config to this file");
        sub->add_flag("--print-config", print_config,
                      "print the effective config and exit without running");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        return report_error("config_error", 2, e.what());
    }

    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }
    CLI::App* active = app.get_subcommands().front();

    try {
        mpjc::ScenarioConfig cfg;
        if (active->count("--config") > 0)
            cfg = mpjc::load_config_file(config_path);
        cfg.kind = active->get_name();  // the subcommand always wins
        for (const FlagSpec& f : kFlags)
            if (options[active][f.key]->count() > 0)
                mpjc::set_config_key(cfg, f.key, staged[f.key]);
        cfg.validate();

        const std::string serialized = mpjc::serialize_config(cfg);
        if (active->count("--save-config") > 0) {
            std::ofstream out(save_config_path,
                              std::ios::binary | std::ios::trunc);
            if (!out || !(out << serialized) || (out.flush(), !out.good()))
                mpjc::fail(mpjc::errc::io_error,
                           "cannot write config to '" + save_config_path + "'");
        }
        if (print_config) {
            std::cout << serialized;
            return 0;
        }

        const mpjc::ScenarioResult res = mpjc::run_scenario(cfg);
        if (res.leak_warning)
            std::cerr << "warning: truncation leakage exceeded leak_tol; "
                         "see the manifest warnings\n";
        std::printf("wrote %s (%ld rows)\n", res.csv_path.c_str(), res.rows);
        std::printf("wrote %s\n", res.manifest_path.c_str());
        return 0;
    } catch (const mpjc::error& e) {
        return report_error(mpjc::errc_name(e.kind()),
                            mpjc::errc_exit_code(e.kind()), e.what());
    } catch (const std::exception& e) {
        return report_error("internal_error", 3, e.what());
    }
}
