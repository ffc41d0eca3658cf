#include "mpjc/scenario.hpp"

#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <utility>

#include "json.hpp"
#include "mpjc/states.hpp"
#include "mpjc/symmetry.hpp"
#include "mpjc/transfer.hpp"
#include "mpjc/version.hpp"
#include "mpjc/wigner.hpp"

namespace mpjc {

namespace {

using nlohmann::json;

// ---- value formatting (shared by config files, CSV, manifests) ----

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_int(long v) { return std::to_string(v); }

std::string fmt_bool(bool v) { return v ? "true" : "false"; }

double parse_double_value(const std::string& key, const std::string& text) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v))
            fail(errc::config_error, "config: bad number for '" + key +
                                         "': '" + text + "'");
        return v;
    } catch (const error&) {
        throw;
    } catch (const std::exception&) {
        fail(errc::config_error,
             "config: bad number for '" + key + "': '" + text + "'");
    }
}

int parse_int_value(const std::string& key, const std::string& text) {
    try {
        size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size() || v < INT_MIN || v > INT_MAX)
            fail(errc::config_error, "config: bad integer for '" + key +
                                         "': '" + text + "'");
        return static_cast<int>(v);
    } catch (const error&) {
        throw;
    } catch (const std::exception&) {
        fail(errc::config_error,
             "config: bad integer for '" + key + "': '" + text + "'");
    }
}

bool parse_bool_value(const std::string& key, const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    fail(errc::config_error, "config: bad boolean for '" + key + "': '" +
                                 text + "' (expected true or false)");
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// ---- the config key table ----
//
// One row per key keeps parsing, serialization, and the manifest echo in
// lockstep; serialize() emits the rows in this order.

struct KeyBinding {
    const char* key;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

const std::vector<KeyBinding>& key_table() {
    static const std::vector<KeyBinding> table = {
        {"schema",
         [](ScenarioConfig& c, const std::string& v) {
             c.schema = parse_int_value("schema", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.schema); }},
        {"kind",
         [](ScenarioConfig& c, const std::string& v) { c.kind = v; },
         [](const ScenarioConfig& c) { return c.kind; }},
        {"engine",
         [](ScenarioConfig& c, const std::string& v) { c.engine = v; },
         [](const ScenarioConfig& c) { return c.engine; }},
        {"n1",
         [](ScenarioConfig& c, const std::string& v) {
             c.params.n1 = parse_int_value("n1", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.params.n1); }},
        {"n2",
         [](ScenarioConfig& c, const std::string& v) {
             c.params.n2 = parse_int_value("n2", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.params.n2); }},
        {"m",
         [](ScenarioConfig& c, const std::string& v) {
             c.params.m = parse_int_value("m", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.params.m); }},
        {"g1",
         [](ScenarioConfig& c, const std::string& v) {
             c.params.g1 = parse_double_value("g1", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.params.g1); }},
        {"g2",
         [](ScenarioConfig& c, const std::string& v) {
             c.params.g2 = parse_double_value("g2", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.params.g2); }},
        {"delta",
         [](ScenarioConfig& c, const std::string& v) {
             c.params.delta = parse_double_value("delta", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.params.delta); }},
        {"phi",
         [](ScenarioConfig& c, const std::string& v) {
             c.params.phi = parse_double_value("phi", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.params.phi); }},
        {"t_min",
         [](ScenarioConfig& c, const std::string& v) {
             c.t_min = parse_double_value("t_min", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.t_min); }},
        {"t_max",
         [](ScenarioConfig& c, const std::string& v) {
             c.t_max = parse_double_value("t_max", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.t_max); }},
        {"t_steps",
         [](ScenarioConfig& c, const std::string& v) {
             c.t_steps = parse_int_value("t_steps", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.t_steps); }},
        {"oscillator",
         [](ScenarioConfig& c, const std::string& v) {
             c.oscillator = parse_int_value("oscillator", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.oscillator); }},
        {"wigner_tol",
         [](ScenarioConfig& c, const std::string& v) {
             c.wigner_tol = parse_double_value("wigner_tol", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.wigner_tol); }},
        {"phi_min",
         [](ScenarioConfig& c, const std::string& v) {
             c.phi_min = parse_double_value("phi_min", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.phi_min); }},
        {"phi_max",
         [](ScenarioConfig& c, const std::string& v) {
             c.phi_max = parse_double_value("phi_max", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.phi_max); }},
        {"phi_steps",
         [](ScenarioConfig& c, const std::string& v) {
             c.phi_steps = parse_int_value("phi_steps", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.phi_steps); }},
        {"n1_max",
         [](ScenarioConfig& c, const std::string& v) {
             c.n1_max = parse_int_value("n1_max", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.n1_max); }},
        {"m_max",
         [](ScenarioConfig& c, const std::string& v) {
             c.m_max = parse_int_value("m_max", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.m_max); }},
        {"delta_min",
         [](ScenarioConfig& c, const std::string& v) {
             c.delta_min = parse_double_value("delta_min", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.delta_min); }},
        {"delta_max",
         [](ScenarioConfig& c, const std::string& v) {
             c.delta_max = parse_double_value("delta_max", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.delta_max); }},
        {"delta_steps",
         [](ScenarioConfig& c, const std::string& v) {
             c.delta_steps = parse_int_value("delta_steps", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.delta_steps); }},
        {"theta_min",
         [](ScenarioConfig& c, const std::string& v) {
             c.theta_min = parse_double_value("theta_min", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.theta_min); }},
        {"theta_max",
         [](ScenarioConfig& c, const std::string& v) {
             c.theta_max = parse_double_value("theta_max", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.theta_max); }},
        {"theta_steps",
         [](ScenarioConfig& c, const std::string& v) {
             c.theta_steps = parse_int_value("theta_steps", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.theta_steps); }},
        {"sym_cutoff",
         [](ScenarioConfig& c, const std::string& v) {
             c.sym_cutoff = parse_int_value("sym_cutoff", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.sym_cutoff); }},
        {"lambda_r",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.lambda_r = parse_double_value("lambda_r", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.lindblad.lambda_r); }},
        {"nbar",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.nbar = parse_double_value("nbar", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.lindblad.nbar); }},
        {"lambda_d",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.lambda_d = parse_double_value("lambda_d", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.lindblad.lambda_d); }},
        {"lind_cutoff",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.cutoff = parse_int_value("lind_cutoff", v);
         },
         [](const ScenarioConfig& c) { return fmt_int(c.lindblad.cutoff); }},
        {"lind_strict",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.strict = parse_bool_value("lind_strict", v);
         },
         [](const ScenarioConfig& c) { return fmt_bool(c.lindblad.strict); }},
        {"lind_rtol",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.rtol = parse_double_value("lind_rtol", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.lindblad.rtol); }},
        {"lind_atol",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.atol = parse_double_value("lind_atol", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.lindblad.atol); }},
        {"leak_tol",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.leak_tol = parse_double_value("leak_tol", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.lindblad.leak_tol); }},
        {"trace_tol",
         [](ScenarioConfig& c, const std::string& v) {
             c.lindblad.trace_tol = parse_double_value("trace_tol", v);
         },
         [](const ScenarioConfig& c) { return fmt_double(c.lindblad.trace_tol); }},
        {"output",
         [](ScenarioConfig& c, const std::string& v) { c.output = v; },
         [](const ScenarioConfig& c) { return c.output; }},
    };
    return table;
}

const std::set<std::string>& known_kinds() {
    static const std::set<std::string> kinds = {
        "evolve",         "negativity",     "phi-scan",
        "transfer-scan",  "detuning-scan",  "decoherence",
        "symmetry-check", "beamsplitter"};
    return kinds;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    out.back() = hi;
    return out;
}

void check_grid(const char* what, double lo, double hi, int n) {
    require(n >= 1, std::string("config: ") + what + " steps must be >= 1");
    if (n > 1 && !(hi > lo))
        fail(errc::config_error, std::string("config: ") + what +
                                     " grid needs max > min when steps > 1");
    if (n == 1 && hi < lo)
        fail(errc::config_error,
             std::string("config: ") + what + " grid has max < min");
}

// ---- CSV assembly ----

class Csv {
  public:
    void header(const std::vector<std::pair<std::string, std::string>>& cols) {
        cols_ = cols;
        for (size_t i = 0; i < cols.size(); ++i) {
            if (i) text_ += ',';
            text_ += cols[i].first;
        }
        text_ += '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
        ++rows_;
    }
    const std::string& text() const { return text_; }
    long rows() const { return rows_; }
    json columns_json() const {
        json arr = json::array();
        for (const auto& [name, desc] : cols_)
            arr.push_back(json{{"description", desc}, {"name", name}});
        return arr;
    }

  private:
    std::vector<std::pair<std::string, std::string>> cols_;
    std::string text_;
    long rows_ = 0;
};

std::string state_label(const BasisState& s) {
    return std::string(s.q == Qubit::ground ? "g" : "e") + "_" +
           std::to_string(s.n1) + "_" + std::to_string(s.n2);
}

// One scenario's computed payload, before file writing.
struct Payload {
    Csv csv;
    json extras = json::object();   // scenario-specific manifest entries
    json tolerances = json::object();
    json engine = json::object();
    std::vector<std::string> warnings;
    bool leak_warning = false;
};

// ---- scenario runners ----

Payload run_evolve(const ScenarioConfig& cfg) {
    Payload out;
    const EnginePath ep = engine_path_from_string(cfg.engine);
    const std::vector<double> times = linspace(cfg.t_min, cfg.t_max, cfg.t_steps);
    const std::vector<FullState> states = full_states(cfg.params, times, ep);
    const LadderSpec& spec = states.front().spec;

    std::vector<std::pair<std::string, std::string>> cols;
    cols.emplace_back("t", "time in 1/g units");
    cols.emplace_back("norm", "total state norm (should stay 1)");
    for (const BasisState& s : spec.x_states) {
        cols.emplace_back("x_" + state_label(s) + "_re",
                          "Re amplitude of " + to_string(s) + " (x branch)");
        cols.emplace_back("x_" + state_label(s) + "_im",
                          "Im amplitude of " + to_string(s) + " (x branch)");
    }
    for (const BasisState& s : spec.y_states) {
        cols.emplace_back("y_" + state_label(s) + "_re",
                          "Re amplitude of " + to_string(s) + " (y branch)");
        cols.emplace_back("y_" + state_label(s) + "_im",
                          "Im amplitude of " + to_string(s) + " (y branch)");
    }
    out.csv.header(cols);
    for (size_t i = 0; i < states.size(); ++i) {
        std::vector<std::string> cells;
        cells.push_back(fmt_double(times[i]));
        cells.push_back(fmt_double(std::sqrt(states[i].norm_sq())));
        for (int k = 0; k < spec.x_dim(); ++k) {
            cells.push_back(fmt_double(states[i].x[k].real()));
            cells.push_back(fmt_double(states[i].x[k].imag()));
        }
        for (int k = 0; k < spec.y_dim(); ++k) {
            cells.push_back(fmt_double(states[i].y[k].real()));
            cells.push_back(fmt_double(states[i].y[k].imag()));
        }
        out.csv.row(cells);
    }
    out.engine = {{"requested", cfg.engine},
                  {"x_path", states.front().x_path},
                  {"y_path", states.front().y_path}};
    out.extras["ladder"] = {{"case", to_string(spec.case_id)},
                            {"x_dim", spec.x_dim()},
                            {"y_dim", spec.y_dim()}};
    return out;
}

Payload run_negativity(const ScenarioConfig& cfg) {
    Payload out;
    const EnginePath ep = engine_path_from_string(cfg.engine);
    const std::vector<double> times = linspace(cfg.t_min, cfg.t_max, cfg.t_steps);
    const std::vector<FullState> states = full_states(cfg.params, times, ep);
    QuadratureOptions opts;
    opts.tol = cfg.wigner_tol;

    out.csv.header({{"t", "time in 1/g units"},
                    {"V", "Wigner negativity volume of the reduced oscillator"},
                    {"V_abs_error", "certified quadrature error bound"},
                    {"purity", "Tr[rho^2] of the reduced oscillator"}});
    for (size_t i = 0; i < states.size(); ++i) {
        const DensityMatrix dm = reduce_oscillator(states[i], cfg.oscillator);
        const NegativityResult neg = negativity_volume(dm, opts);
        out.csv.row({fmt_double(times[i]), fmt_double(neg.volume),
                     fmt_double(neg.abs_error), fmt_double(purity(dm))});
    }
    out.engine = {{"requested", cfg.engine},
                  {"x_path", states.front().x_path},
                  {"y_path", states.front().y_path}};
    out.tolerances["wigner_tol"] = cfg.wigner_tol;
    out.extras["oscillator"] = cfg.oscillator;
    return out;
}

Payload run_phi_scan(const ScenarioConfig& cfg) {
    Payload out;
    const EnginePath ep = engine_path_from_string(cfg.engine);
    const std::vector<double> times = linspace(cfg.t_min, cfg.t_max, cfg.t_steps);
    const std::vector<double> phis =
        linspace(cfg.phi_min, cfg.phi_max, cfg.phi_steps);
    QuadratureOptions opts;
    opts.tol = cfg.wigner_tol;

    out.csv.header(
        {{"phi", "initial superposition angle"},
         {"max_V", "max over the time grid of the negativity volume"},
         {"argmax_t", "grid time achieving the maximum"}});
    std::string x_path, y_path;
    for (double phi : phis) {
        ModelParams p = cfg.params;
        p.phi = phi;
        const std::vector<FullState> states = full_states(p, times, ep);
        x_path = states.front().x_path;
        y_path = states.front().y_path;
        double best_v = 0.0;
        double best_t = times.front();
        for (size_t i = 0; i < states.size(); ++i) {
            const DensityMatrix dm =
                reduce_oscillator(states[i], cfg.oscillator);
            const double v = negativity_volume(dm, opts).volume;
            if (v > best_v) {
                best_v = v;
                best_t = times[i];
            }
        }
        out.csv.row({fmt_double(phi), fmt_double(best_v), fmt_double(best_t)});
    }
    out.engine = {{"requested", cfg.engine},
                  {"x_path", x_path},
                  {"y_path", y_path}};
    out.tolerances["wigner_tol"] = cfg.wigner_tol;
    out.extras["oscillator"] = cfg.oscillator;
    return out;
}

Payload run_transfer_scan(const ScenarioConfig& cfg) {
    Payload out;
    out.csv.header(
        {{"n1", "initial photons in oscillator 1"},
         {"m", "photons exchanged per qubit flip"},
         {"A", "peak transfer amplitude at the configured couplings"},
         {"epsilon", "g1/g2 ratio that would make A = 1"}});
    for (int n1 = 0; n1 <= cfg.n1_max; ++n1) {
        for (int m = 1; m <= cfg.m_max; ++m) {
            out.csv.row({fmt_int(n1), fmt_int(m),
                         fmt_double(swap_amplitude(n1, m, cfg.params.g1,
                                                   cfg.params.g2)),
                         fmt_double(epsilon_asym(n1, m))});
        }
    }
    out.engine = {{"requested", cfg.engine}, {"path", "closed-form"}};
    return out;
}

Payload run_detuning_scan(const ScenarioConfig& cfg) {
    Payload out;
    const EnginePath ep = engine_path_from_string(cfg.engine);
    const std::vector<double> times = linspace(cfg.t_min, cfg.t_max, cfg.t_steps);
    const std::vector<double> deltas =
        linspace(cfg.delta_min, cfg.delta_max, cfg.delta_steps);
    QuadratureOptions opts;
    opts.tol = cfg.wigner_tol;

    out.csv.header(
        {{"delta", "qubit detuning"},
         {"t", "time in 1/g units"},
         {"V", "Wigner negativity volume of the reduced oscillator"},
         {"V_abs_error", "certified quadrature error bound"}});
    json per_delta = json::array();
    for (double delta : deltas) {
        ModelParams p = cfg.params;
        p.delta = delta;
        const std::vector<FullState> states = full_states(p, times, ep);
        per_delta.push_back(json{{"delta", fmt_double(delta)},
                                 {"x_path", states.front().x_path},
                                 {"y_path", states.front().y_path}});
        for (size_t i = 0; i < states.size(); ++i) {
            const DensityMatrix dm =
                reduce_oscillator(states[i], cfg.oscillator);
            const NegativityResult neg = negativity_volume(dm, opts);
            out.csv.row({fmt_double(delta), fmt_double(times[i]),
                         fmt_double(neg.volume), fmt_double(neg.abs_error)});
        }
    }
    out.engine = {{"requested", cfg.engine}, {"per_delta", per_delta}};
    out.tolerances["wigner_tol"] = cfg.wigner_tol;
    out.extras["oscillator"] = cfg.oscillator;
    return out;
}

// Drop trailing labels whose rows/columns are numerically empty so the
// quadrature radius tracks the actual support of the reduced state.
DensityMatrix trim_reduced(DensityMatrix dm) {
    int d = dm.dim();
    while (d > 1) {
        const double edge = std::max(dm.rho.row(d - 1).cwiseAbs().maxCoeff(),
                                     dm.rho.col(d - 1).cwiseAbs().maxCoeff());
        if (edge > 1e-15) break;
        --d;
    }
    if (d < dm.dim()) {
        dm.labels.resize(d);
        dm.rho.conservativeResize(d, d);
    }
    return dm;
}

Payload run_decoherence(const ScenarioConfig& cfg) {
    Payload out;
    const std::vector<double> times = linspace(cfg.t_min, cfg.t_max, cfg.t_steps);
    const MasterResult res = evolve_master(cfg.params, cfg.lindblad, times);
    QuadratureOptions opts;
    opts.tol = cfg.wigner_tol;

    out.csv.header(
        {{"t", "time in 1/g units"},
         {"V", "Wigner negativity volume of the reduced oscillator"},
         {"V_abs_error", "certified quadrature error bound"},
         {"trace", "Tr[rho] of the full open-system state"},
         {"purity", "Tr[rho^2] of the reduced oscillator"},
         {"leakage", "population of the truncation edge band"}});
    for (size_t i = 0; i < res.states.size(); ++i) {
        const DensityMatrix dm = trim_reduced(
            partial_trace_oscillator(res.space, res.states[i], cfg.oscillator));
        const NegativityResult neg = negativity_volume(dm, opts);
        out.csv.row({fmt_double(res.times[i]), fmt_double(neg.volume),
                     fmt_double(neg.abs_error),
                     fmt_double(res.states[i].trace().real()),
                     fmt_double(purity(dm)),
                     fmt_double(edge_population(res.space, res.states[i]))});
    }

    json ops = json::array();
    for (const LindbladOp& op : build_lindblad_ops(res.space, cfg.lindblad))
        ops.push_back(json{{"name", op.name}, {"rate", op.rate}});
    out.extras["integrator"] = {
        {"cutoff", res.space.cutoff},
        {"max_hermiticity_drift", res.max_hermiticity_drift},
        {"max_leakage", res.max_leakage},
        {"max_trace_drift", res.max_trace_drift},
        {"steps_accepted", res.steps_accepted},
        {"steps_rejected", res.steps_rejected}};
    out.extras["collapse_operators"] = ops;
    out.extras["oscillator"] = cfg.oscillator;
    out.engine = {{"requested", cfg.engine}, {"path", "master-rk45"}};
    out.tolerances = {{"leak_tol", cfg.lindblad.leak_tol},
                      {"lind_atol", cfg.lindblad.atol},
                      {"lind_rtol", cfg.lindblad.rtol},
                      {"trace_tol", cfg.lindblad.trace_tol},
                      {"wigner_tol", cfg.wigner_tol}};
    if (res.leak_warning) {
        out.leak_warning = true;
        out.warnings.push_back(
            "truncation leakage exceeded leak_tol; results near the cutoff "
            "are not converged (raise lind_cutoff)");
    }
    return out;
}

Payload run_symmetry_check(const ScenarioConfig& cfg) {
    Payload out;
    const int m = cfg.params.m;
    const int cut = cfg.sym_cutoff == -1 ? 3 * m + 3 : cfg.sym_cutoff;
    out.csv.header({{"metric", "name of the symmetry diagnostic"},
                    {"value", "numeric value"}});
    out.csv.row({"commutator_norm",
                 fmt_double(commutator_norm(cfg.params, cut))});

    std::string canonical_status = "ok";
    const int conj_cut = 2 * m + 3;
    try {
        const CanonicalCouplings cc =
            canonical_couplings(cfg.params.g1, cfg.params.g2, m);
        out.csv.row({"canonical_theta", fmt_double(cc.theta)});
        out.csv.row({"canonical_g_tilde", fmt_double(cc.g_tilde)});
        for (size_t k = 0; k < cc.tripartite.size(); ++k)
            out.csv.row({"tripartite_" + std::to_string(k + 1),
                         fmt_double(cc.tripartite[k])});
        double residual = 0.0;
        const std::vector<double> coeffs = decompose_interaction(
            cfg.params.g1, cfg.params.g2, m, cc.theta, conj_cut, &residual);
        out.csv.row({"conjugation_residual", fmt_double(residual)});
        out.csv.row({"b2_coupling_at_theta", fmt_double(coeffs[0])});
        out.csv.row({"b1_coupling_mismatch",
                     fmt_double(std::abs(coeffs[m] - cc.g_tilde))});
        double worst = 0.0;
        for (int k = 1; k <= m - 1; ++k)
            worst = std::max(worst,
                             std::abs(coeffs[k] - cc.tripartite[k - 1]));
        out.csv.row({"tripartite_mismatch_max", fmt_double(worst)});
    } catch (const error& e) {
        if (e.kind() != errc::analytic_domain) throw;
        canonical_status = e.what();
    }
    out.extras["symmetry"] = {{"canonical_status", canonical_status},
                              {"conjugation_cutoff", conj_cut},
                              {"cutoff", cut}};
    out.engine = {{"requested", cfg.engine}, {"path", "truncated-operator"}};
    return out;
}

Payload run_beamsplitter(const ScenarioConfig& cfg) {
    Payload out;
    const int n1 = cfg.params.n1;
    const int n2 = cfg.params.n2;
    const std::vector<double> thetas =
        linspace(cfg.theta_min, cfg.theta_max, cfg.theta_steps);

    std::vector<std::pair<std::string, std::string>> cols = {
        {"theta", "beamsplitter rotation angle"},
        {"P", "probability of the fully-concentrated output ket"}};
    for (int j = 0; j <= n1 + n2; ++j) {
        const std::string ket = std::to_string(j) + "_" +
                                std::to_string(n1 + n2 - j);
        cols.emplace_back("p_" + ket,
                          "probability of output |" + std::to_string(j) +
                              ", " + std::to_string(n1 + n2 - j) + ">");
    }
    out.csv.header(cols);
    for (double theta : thetas) {
        std::vector<std::string> cells = {
            fmt_double(theta), fmt_double(beamsplitter_prob(n1, n2, theta))};
        for (const BeamsplitterTerm& term : beamsplitter_output(n1, n2, theta))
            cells.push_back(fmt_double(std::norm(term.amp)));
        out.csv.row(cells);
    }
    out.engine = {{"requested", cfg.engine}, {"path", "closed-form"}};
    return out;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (schema != config_schema_version)
        fail(errc::config_error,
             "config: unsupported schema " + std::to_string(schema) +
                 " (this engine reads schema " +
                 std::to_string(config_schema_version) + ")");
    if (known_kinds().count(kind) == 0)
        fail(errc::config_error, "config: unknown kind '" + kind + "'");
    engine_path_from_string(engine);  // rejects unknown spellings
    params.validate();
    if (t_min < 0.0)
        fail(errc::config_error, "config: t_min must be >= 0");
    check_grid("t", t_min, t_max, t_steps);
    check_grid("phi", phi_min, phi_max, phi_steps);
    check_grid("delta", delta_min, delta_max, delta_steps);
    check_grid("theta", theta_min, theta_max, theta_steps);
    if (oscillator != 1 && oscillator != 2)
        fail(errc::config_error, "config: oscillator must be 1 or 2");
    if (!(wigner_tol >= 1e-10 && wigner_tol <= 1.0))
        fail(errc::config_error,
             "config: wigner_tol must lie in [1e-10, 1]");
    if (n1_max < 0 || m_max < 1)
        fail(errc::config_error,
             "config: need n1_max >= 0 and m_max >= 1");
    if (sym_cutoff != -1 && sym_cutoff < 3 * params.m + 3)
        fail(errc::config_error,
             "config: sym_cutoff must be -1 (auto) or >= 3m + 3");
    lindblad.validate();
}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    std::set<std::string> seen;
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::config_error, "config line " + std::to_string(line_no) +
                                         ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const KeyBinding* binding = nullptr;
        for (const KeyBinding& kb : key_table())
            if (key == kb.key) {
                binding = &kb;
                break;
            }
        if (binding == nullptr)
            fail(errc::config_error, "config line " + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            fail(errc::config_error, "config line " + std::to_string(line_no) +
                                         ": duplicate key '" + key + "'");
        binding->set(cfg, value);
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(errc::io_error, "cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (in.bad())
        fail(errc::io_error, "cannot read config file '" + path + "'");
    return parse_config_text(text);
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::string out;
    for (const KeyBinding& kb : key_table()) {
        out += kb.key;
        out += " = ";
        out += kb.get(cfg);
        out += '\n';
    }
    return out;
}

void set_config_key(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value) {
    for (const KeyBinding& kb : key_table()) {
        if (key == kb.key) {
            kb.set(cfg, value);
            return;
        }
    }
    fail(errc::config_error, "config: unknown key '" + key + "'");
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    keys.reserve(key_table().size());
    for (const KeyBinding& kb : key_table()) keys.push_back(kb.key);
    return keys;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    Payload payload;
    if (cfg.kind == "evolve") payload = run_evolve(cfg);
    else if (cfg.kind == "negativity") payload = run_negativity(cfg);
    else if (cfg.kind == "phi-scan") payload = run_phi_scan(cfg);
    else if (cfg.kind == "transfer-scan") payload = run_transfer_scan(cfg);
    else if (cfg.kind == "detuning-scan") payload = run_detuning_scan(cfg);
    else if (cfg.kind == "decoherence") payload = run_decoherence(cfg);
    else if (cfg.kind == "symmetry-check") payload = run_symmetry_check(cfg);
    else if (cfg.kind == "beamsplitter") payload = run_beamsplitter(cfg);
    else fail(errc::config_error, "config: unknown kind '" + cfg.kind + "'");

    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();

    // Resolve output paths.
    namespace fs = std::filesystem;
    fs::path base(cfg.output.empty() ? cfg.kind : cfg.output);
    if (const char* dir = std::getenv("MPJC_OUT_DIR");
        dir != nullptr && *dir != '\0' && base.is_relative())
        base = fs::path(dir) / base;
    const std::string csv_path = base.string() + ".csv";
    const std::string manifest_path = base.string() + ".manifest.json";
    try {
        if (!base.parent_path().empty())
            fs::create_directories(base.parent_path());
    } catch (const std::exception& e) {
        fail(errc::io_error, std::string("cannot create output directory: ") +
                                 e.what());
    }

    json config_echo = json::object();
    for (const KeyBinding& kb : key_table()) config_echo[kb.key] = kb.get(cfg);

    json manifest = {
        {"columns", payload.csv.columns_json()},
        {"config", config_echo},
        {"csv", {{"path", csv_path}, {"rows", payload.csv.rows()}}},
        {"engine", payload.engine},
        {"engine_version", engine_version},
        {"scenario", cfg.kind},
        {"schema", cfg.schema},
        {"tolerances", payload.tolerances},
        {"wall_time_ms", wall_ms},
        {"warnings", payload.warnings},
    };
    for (auto& [key, value] : payload.extras.items()) manifest[key] = value;

    auto write_file = [](const std::string& path, const std::string& data) {
        std::ofstream outf(path, std::ios::binary | std::ios::trunc);
        if (!outf)
            fail(errc::io_error, "cannot open '" + path + "' for writing");
        outf << data;
        outf.flush();
        if (!outf.good())
            fail(errc::io_error, "failed while writing '" + path + "'");
    };
    write_file(csv_path, payload.csv.text());
    write_file(manifest_path, manifest.dump(2) + "\n");

    ScenarioResult result;
    result.csv_path = csv_path;
    result.manifest_path = manifest_path;
    result.rows = payload.csv.rows();
    result.leak_warning = payload.leak_warning;
    result.wall_time_ms = wall_ms;
    return result;
}

}  // namespace mpjc
