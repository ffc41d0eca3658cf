// Acceptance gate: one PASS/FAIL line per criterion, exit 0 iff all pass.
//
// Each check is self-contained and uses independent oracles where the
// criterion asks for one (brute-force reachability, dense Riemann sums,
// explicit polynomial kernels). Timed criteria assert their own budgets.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mpjc/dynamics.hpp"
#include "mpjc/lindblad.hpp"
#include "mpjc/scenario.hpp"
#include "mpjc/symmetry.hpp"
#include "mpjc/transfer.hpp"
#include "mpjc/wigner.hpp"

using namespace mpjc;

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---- harness ----

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const std::string& label,
                   const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (!out.pass) ++g_failures;
    std::printf("[%2d] %s  %6.2fs  %s%s%s\n", id,
                out.pass ? "PASS" : "FAIL", secs, label.c_str(),
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

// ---- shared helpers ----

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

DensityMatrix fock_dm(int n) {
    DensityMatrix dm;
    dm.labels = {n};
    dm.rho = Eigen::MatrixXcd::Zero(1, 1);
    dm.rho(0, 0) = 1.0;
    return dm;
}

// Negativity of oscillator 1 for the standard initial state at time t.
NegativityResult neg_at(const ModelParams& p, double t, double tol) {
    const FullState s = full_state(p, t);
    return negativity_volume(reduce_oscillator(s, 1), tol);
}

// ---- criterion 1: ladder counting vs brute-force reachability ----

using Key = std::tuple<int, int, int>;

std::set<Key> reachable(Qubit q0, int n1, int n2, int m) {
    std::set<Key> seen;
    std::queue<Key> todo;
    const Key seed{static_cast<int>(q0), n1, n2};
    seen.insert(seed);
    todo.push(seed);
    while (!todo.empty()) {
        const auto [q, k1, k2] = todo.front();
        todo.pop();
        std::vector<Key> next;
        if (q == 1) {
            next.push_back({0, k1 + m, k2});
            next.push_back({0, k1, k2 + m});
        } else {
            if (k1 >= m) next.push_back({1, k1 - m, k2});
            if (k2 >= m) next.push_back({1, k1, k2 - m});
        }
        for (const Key& k : next)
            if (seen.insert(k).second) todo.push(k);
    }
    return seen;
}

Outcome criterion_ladder_counts() {
    const auto start = std::chrono::steady_clock::now();
    int grids = 0;
    for (int m = 1; m <= 4; ++m) {
        for (int n1 = 0; n1 <= 10; ++n1) {
            for (int n2 = 0; n2 <= 10; ++n2) {
                const LadderSpec spec = enumerate_basis(n1, n2, m);
                const int l1 = ell(n1, m), l2 = ell(n2, m);
                const auto rx = reachable(Qubit::ground, n1, n2, m);
                const auto ry = reachable(Qubit::excited, n1, n2, m);
                std::set<Key> ex, ey;
                for (const BasisState& s : spec.x_states)
                    ex.insert({static_cast<int>(s.q), s.n1, s.n2});
                for (const BasisState& s : spec.y_states)
                    ey.insert({static_cast<int>(s.q), s.n1, s.n2});
                if (ex != rx || ey != ry) {
                    return {false, "enumeration mismatch at n1=" +
                                       std::to_string(n1) + " n2=" +
                                       std::to_string(n2) + " m=" +
                                       std::to_string(m)};
                }
                if (spec.x_dim() != 2 * l1 + 2 * l2 - 3 ||
                    spec.y_dim() != 2 * l1 + 2 * l2 - 1 ||
                    spec.total_dim() != 4 * (l1 + l2 - 1)) {
                    return {false, "count formula mismatch at n1=" +
                                       std::to_string(n1) + " n2=" +
                                       std::to_string(n2) + " m=" +
                                       std::to_string(m)};
                }
                ++grids;
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (secs >= 1.0) return {false, fmt("took %.2fs (budget 1s)", secs)};
    return {true, std::to_string(grids) + " grids, runtime " +
                      fmt("%.2fs < 1s", secs)};
}

// ---- criterion 2: analytic vs numeric over random draws ----

Outcome criterion_engines_agree() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> g(0.05, 1.0);
    std::uniform_real_distribution<double> ang(0.0, kPi / 2.0);
    std::uniform_real_distribution<double> det(-1.0, 1.0);
    std::uniform_real_distribution<double> time(0.0, 20.0);
    std::uniform_int_distribution<int> mm(1, 4);

    double worst = 0.0;
    std::string worst_at;
    const int kDraws = 200;

    for (int mode = 0; mode < 4; ++mode) {
        for (int i = 0; i < kDraws; ++i) {
            ModelParams p;
            p.m = mm(rng);
            std::uniform_int_distribution<int> small(0, p.m - 1);
            p.g1 = g(rng);
            p.g2 = g(rng);
            p.phi = ang(rng);
            const double t = time(rng);

            CoefficientVector lhs, rhs;
            const CouplingMatrices* cm = nullptr;
            CouplingMatrices built;
            switch (mode) {
                case 0:  // both oscillators below threshold, any detuning
                    p.n1 = small(rng);
                    p.n2 = small(rng);
                    p.delta = det(rng);
                    built = build_matrices(p);
                    cm = &built;
                    {
                        CoefficientVector x0 =
                            CoefficientVector::Zero(cm->x.rows());
                        x0(0) = std::cos(p.phi);
                        lhs = analytic_case1_x(p, t);
                        rhs = evolve_numeric(cm->x, x0, t);
                    }
                    break;
                case 1:  // one packet, ground branch, any detuning
                    p.n1 = small(rng);
                    p.n2 = p.m;
                    p.delta = det(rng);
                    built = build_matrices(p);
                    cm = &built;
                    {
                        CoefficientVector x0 =
                            CoefficientVector::Zero(cm->x.rows());
                        x0(0) = std::cos(p.phi);
                        lhs = analytic_case2_x(p, t);
                        rhs = evolve_numeric(cm->x, x0, t);
                    }
                    break;
                case 2:  // one packet, excited branch, resonant
                    p.n1 = small(rng);
                    p.n2 = p.m;
                    p.delta = 0.0;
                    built = build_matrices(p);
                    cm = &built;
                    {
                        CoefficientVector y0 =
                            CoefficientVector::Zero(cm->y.rows());
                        y0(0) = std::sin(p.phi);
                        lhs = analytic_case2_y(p, t);
                        rhs = evolve_numeric(cm->y, y0, t);
                    }
                    break;
                default:  // two packets, ground branch, resonant
                    p.n1 = p.m;
                    p.n2 = p.m;
                    p.delta = 0.0;
                    built = build_matrices(p);
                    cm = &built;
                    {
                        CoefficientVector x0 =
                            CoefficientVector::Zero(cm->x.rows());
                        x0(0) = std::cos(p.phi);
                        lhs = analytic_case3_x(p, t);
                        rhs = evolve_numeric(cm->x, x0, t);
                    }
                    break;
            }
            const double err = (lhs - rhs).cwiseAbs().maxCoeff();
            if (err > worst) {
                worst = err;
                worst_at = "mode " + std::to_string(mode) + ", m=" +
                           std::to_string(p.m);
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (worst >= 1e-9)
        return {false,
                "max coefficient error " + fmt("%.2e", worst) + " at " +
                    worst_at};
    if (secs >= 10.0) return {false, fmt("took %.2fs (budget 10s)", secs)};
    return {true, "4 x 200 draws, max error " + fmt("%.2e", worst) +
                      ", runtime " + fmt("%.2fs < 10s", secs)};
}

// ---- criterion 3: perfect packet swap from vacuum ----

Outcome criterion_perfect_swap() {
    for (int m = 1; m <= 3; ++m) {
        const TransferReport r = transfer_plan(0, m, 1.0 / std::sqrt(2.0));
        const double t_expect = kPi / std::sqrt(factorial(m));
        if (std::abs(r.t_star - t_expect) > 1e-12)
            return {false, "t* off for m=" + std::to_string(m)};
        if (std::abs(r.g1 - r.g2) > 1e-15 ||
            std::abs(r.g2 - 1.0 / std::sqrt(2.0)) > 1e-15)
            return {false, "coupling choice off for m=" + std::to_string(m)};
        if (r.peak_fidelity < 1.0 - 1e-6)
            return {false, "fidelity " + fmt("%.12f", r.peak_fidelity) +
                               " at m=" + std::to_string(m)};
    }
    return {true, "fidelity >= 1 - 1e-6 at t* = pi/sqrt(m!) for m = 1, 2, 3"};
}

// ---- criterion 4: skew-matched transfer for occupied targets ----

Outcome criterion_asymmetric_transfer() {
    const std::vector<std::tuple<int, int, double>> table = {
        {1, 2, 0.58}, {1, 3, 0.50}, {2, 3, 0.32}};
    for (const auto& [n1, m, eps_ref] : table) {
        const TransferReport r = transfer_plan(n1, m, 1.0 / std::sqrt(2.0));
        if (std::abs(r.epsilon_required - eps_ref) > 0.005)
            return {false, "epsilon(" + std::to_string(n1) + "," +
                               std::to_string(m) + ") = " +
                               fmt("%.4f", r.epsilon_required) +
                               " vs reference " + fmt("%.2f", eps_ref)};
        if (std::abs(r.A - 1.0) > 1e-12)
            return {false, "skew-matched amplitude not 1"};
        if (r.peak_fidelity < 1.0 - 1e-6)
            return {false, "fidelity " + fmt("%.12f", r.peak_fidelity)};
    }
    return {true, "epsilon matches the exact skew within 0.005; "
                  "fidelity >= 1 - 1e-6 on all three pairs"};
}

// ---- criterion 5: positivity for low exchange numbers ----

Outcome criterion_positivity() {
    double worst = 0.0;
    // single-photon exchange from vacuum: positive at every angle
    for (int k = 0; k < 9; ++k) {
        ModelParams p;
        p.m = 1;
        p.phi = (kPi / 2.0) * k / 8.0;
        for (double t = 0.0; t <= 30.0 + 1e-9; t += 0.25) {
            const double v = neg_at(p, t, 1e-6).volume;
            worst = std::max(worst, v);
            if (v >= 1e-6)
                return {false, "m=1 phi=" + fmt("%.3f", p.phi) + " t=" +
                                   fmt("%.2f", t) + " V=" + fmt("%.2e", v)};
        }
    }
    // two-photon exchange seeded fully excited: also positive
    ModelParams p2;
    p2.m = 2;
    p2.phi = kPi / 2.0;
    for (double t = 0.0; t <= 30.0 + 1e-9; t += 0.25) {
        const double v = neg_at(p2, t, 1e-6).volume;
        worst = std::max(worst, v);
        if (v >= 1e-6)
            return {false,
                    "m=2 t=" + fmt("%.2f", t) + " V=" + fmt("%.2e", v)};
    }
    return {true, "V < 1e-6 on all 1210 grid points (max " +
                      fmt("%.1e", worst) + ")"};
}

// ---- criterion 6: three-photon vacuum negativity and its angle scan ----

Outcome criterion_vacuum_negativity() {
    // the reduced state repeats with period pi / sqrt(m!) for unit total
    // coupling, so one period of t bounds the full window from below
    ModelParams p;
    p.m = 3;
    p.phi = kPi / 4.0;
    double vmax = 0.0;
    for (double t = 0.0; t <= 1.30; t += 0.025)
        vmax = std::max(vmax, neg_at(p, t, 1e-6).volume);
    if (vmax <= 0.01)
        return {false, "max V = " + fmt("%.4f", vmax) + " <= 0.01"};

    for (int m : {2, 3}) {
        const double period = kPi / std::sqrt(factorial(m));
        const int n_phi = 17;
        double best_v = -1.0, best_phi = 0.0;
        for (int i = 0; i < n_phi; ++i) {
            const double phi = (kPi / 2.0) * i / (n_phi - 1);
            ModelParams q;
            q.m = m;
            q.phi = phi;
            double v = 0.0;
            const int nt = 45;
            for (int j = 0; j <= nt; ++j)
                v = std::max(
                    v, neg_at(q, period * j / nt, 1e-6).volume);
            if (v > best_v) {
                best_v = v;
                best_phi = phi;
            }
        }
        if (!(best_phi > kPi / 8.0 && best_phi < kPi / 3.0))
            return {false, "argmax phi = " + fmt("%.4f", best_phi) +
                               " outside (pi/8, pi/3) for m=" +
                               std::to_string(m)};
        if (best_v <= 0.01)
            return {false, "scan peak too small for m=" + std::to_string(m)};
    }
    return {true, "max V = " + fmt("%.3f", vmax) +
                      " > 0.01; angle-scan argmax inside (pi/8, pi/3) "
                      "for m = 2, 3"};
}

// ---- criterion 7: balanced packets never beat their initial negativity ----

Outcome criterion_no_enhancement() {
    const double tol_v = 1e-5;
    for (int m = 1; m <= 3; ++m) {
        for (const double phi : {0.0, kPi / 4.0, kPi / 2.0}) {
            ModelParams p;
            p.n1 = m;
            p.n2 = m;
            p.m = m;
            p.phi = phi;
            const double v0 = neg_at(p, 0.0, tol_v).volume;

            double vmax = 0.0;
            std::vector<double> vs;
            std::vector<double> ts;
            for (double t = 0.0; t <= 30.0 + 1e-9; t += 0.1) {
                const double v = neg_at(p, t, tol_v).volume;
                vs.push_back(v);
                ts.push_back(t);
                vmax = std::max(vmax, v);
            }
            if (vmax > v0 + 1e-4)
                return {false, "m=" + std::to_string(m) + " phi=" +
                                   fmt("%.3f", phi) + ": max V " +
                                   fmt("%.6f", vmax) + " > V(0) + 1e-4 = " +
                                   fmt("%.6f", v0 + 1e-4)};

            if (phi != 0.0) continue;

            // ground-seeded start: V must keep returning to its initial
            // value; locate grid minima of |V - V0| and polish each
            auto v_at = [&](double t) { return neg_at(p, t, 1e-6).volume; };
            int returns = 0;
            double last_return = -1.0;
            for (size_t i = 1; i + 1 < vs.size() && returns < 2; ++i) {
                const double d0 = std::abs(vs[i] - v0);
                if (std::abs(vs[i - 1] - v0) < d0 ||
                    std::abs(vs[i + 1] - v0) < d0)
                    continue;  // not a local minimum of the defect
                if (d0 > 0.05) continue;  // nowhere near a return
                if (last_return >= 0.0 && ts[i] - last_return < 0.5)
                    continue;
                // golden-section polish of |V(t) - V0| on the bracket
                double a = ts[i] - 0.1, b = ts[i] + 0.1;
                const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
                double c = b - gr * (b - a), d = a + gr * (b - a);
                double fc = std::abs(v_at(c) - v0);
                double fd = std::abs(v_at(d) - v0);
                for (int it = 0; it < 30; ++it) {
                    if (fc < fd) {
                        b = d;
                        d = c;
                        fd = fc;
                        c = b - gr * (b - a);
                        fc = std::abs(v_at(c) - v0);
                    } else {
                        a = c;
                        c = d;
                        fc = fd;
                        d = a + gr * (b - a);
                        fd = std::abs(v_at(d) - v0);
                    }
                }
                const double defect = std::min(fc, fd);
                if (defect <= 1e-4) {
                    ++returns;
                    last_return = ts[i];
                }
            }
            if (returns < 2)
                return {false, "m=" + std::to_string(m) +
                                   ": fewer than 2 periodic returns of V "
                                   "to its initial value within 1e-4"};
        }
    }
    return {true, "max V <= V(0) + 1e-4 on a 0.1-step grid over [0, 30]; "
                  "ground-seeded runs return to V(0) within 1e-4"};
}

// ---- criterion 8: quadrature vs dense Riemann oracle on number states ----

Outcome criterion_fock_baselines() {
    const auto start = std::chrono::steady_clock::now();
    // L_n(x) written out: the oracle shares nothing with the library
    const auto lag = [](int n, double x) {
        switch (n) {
            case 1: return 1.0 - x;
            case 2: return 1.0 - 2.0 * x + 0.5 * x * x;
            default:
                return 1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0;
        }
    };
    std::string vals;
    for (int n = 1; n <= 3; ++n) {
        const double sign = (n % 2 == 1) ? -1.0 : 1.0;
        const double dr = 1e-4;
        double oracle = 0.0;
        for (double r = 0.5 * dr; r < 7.0; r += dr) {
            const double w = sign * (2.0 / kPi) *
                             std::exp(-2.0 * r * r) * lag(n, 4.0 * r * r);
            if (w < 0.0) oracle -= 2.0 * kPi * r * w * dr;
        }
        const NegativityResult q = negativity_volume(fock_dm(n), 1e-6);
        if (std::abs(q.volume - oracle) > 1e-4)
            return {false, "n=" + std::to_string(n) + ": quadrature " +
                               fmt("%.6f", q.volume) + " vs oracle " +
                               fmt("%.6f", oracle)};
        vals += (n > 1 ? ", " : "") + fmt("%.4f", q.volume);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (secs >= 30.0) return {false, fmt("took %.2fs (budget 30s)", secs)};
    return {true, "V = " + vals + " match the dense oracle within 1e-4, " +
                      fmt("runtime %.2fs < 30s", secs)};
}

// ---- criterion 9: open-system sanity ----

Outcome criterion_open_system() {
    ModelParams p;
    p.m = 3;
    p.phi = kPi / 4.0;  // the nontrivial-negativity scenario

    // (a) zero-rate limit reproduces the closed trace
    {
        LindbladConfig cfg;
        cfg.rtol = 1e-9;
        cfg.atol = 1e-13;
        const std::vector<double> times{0.0, 0.3, 0.64, 1.0, 1.28};
        const MasterResult res = evolve_master(p, cfg, times);
        for (size_t i = 0; i < times.size(); ++i) {
            const DensityMatrix open_dm =
                partial_trace_oscillator(res.space, res.states[i], 1);
            const NegativityResult vo = negativity_volume(open_dm, 2e-7);
            const NegativityResult vu = neg_at(p, times[i], 2e-7);
            if (std::abs(vo.volume - vu.volume) > 1e-6)
                return {false, "zero-rate V mismatch " +
                                   fmt("%.2e", std::abs(vo.volume -
                                                        vu.volume)) +
                                   " at t=" + fmt("%.2f", times[i])};
        }
        if (res.max_trace_drift > 1e-8)
            return {false, "zero-rate trace drift " +
                               fmt("%.2e", res.max_trace_drift)};
    }

    // (b) damped traces: below the closed curve after its first peak,
    //     ordered by the thermal occupation at late times
    std::vector<double> times;
    for (double t = 0.0; t <= 12.0 + 1e-9; t += 0.4) times.push_back(t);
    const size_t i_peak = 2;   // closed-trace peak near t = 0.64
    const size_t i_late = times.size() - 1;

    std::vector<double> closed_v(times.size());
    for (size_t i = 0; i < times.size(); ++i)
        closed_v[i] = neg_at(p, times[i], 1e-6).volume;
    if (!(closed_v[i_peak] > 0.1))
        return {false, "closed trace has no first peak near t = 0.8"};

    std::vector<double> late;
    for (const double nbar : {0.0, 0.1, 0.2}) {
        LindbladConfig cfg;
        cfg.lambda_r = 0.05;
        cfg.nbar = nbar;
        cfg.rtol = 1e-7;
        cfg.atol = 1e-12;
        const MasterResult res = evolve_master(p, cfg, times);
        if (res.max_trace_drift > 1e-8)
            return {false, "trace drift " + fmt("%.2e", res.max_trace_drift) +
                               " at nbar=" + fmt("%.1f", nbar)};
        for (size_t i = i_peak; i < times.size(); ++i) {
            const DensityMatrix dm =
                partial_trace_oscillator(res.space, res.states[i], 1);
            const NegativityResult v = negativity_volume(dm, 1e-6);
            if (v.volume > closed_v[i] + 2e-6)
                return {false, "damped V exceeds the closed trace at t=" +
                                   fmt("%.1f", times[i]) + ", nbar=" +
                                   fmt("%.1f", nbar)};
            if (i == i_late) late.push_back(v.volume);
        }
    }
    if (!(late[0] >= late[1] - 1e-6 && late[1] >= late[2] - 1e-6))
        return {false, "late-time V not ordered by nbar: " +
                           fmt("%.3e", late[0]) + " / " +
                           fmt("%.3e", late[1]) + " / " +
                           fmt("%.3e", late[2])};
    return {true, "zero-rate matches closed V within 1e-6; damped traces "
                  "stay below the closed one and order by nbar; trace "
                  "drift < 1e-8"};
}

// ---- criterion 10: beamsplitter oracle ----

Outcome criterion_beamsplitter() {
    for (int n = 0; n <= 6; ++n) {
        if (beamsplitter_prob(0, n, kPi / 2.0) != 1.0)
            return {false, "P(0," + std::to_string(n) + ",pi/2) != 1"};
    }
    for (int n1 = 1; n1 <= 4; ++n1) {
        for (int n2 = 1; n2 <= 4; ++n2) {
            double best = 0.0;
            for (int i = 0; i <= 4000; ++i)
                best = std::max(best, beamsplitter_prob(
                                          n1, n2, kPi / 2.0 * i / 4000.0));
            if (best >= 1.0 - 1e-6)
                return {false, "concentration " + fmt("%.8f", best) +
                                   " at n1=" + std::to_string(n1) + " n2=" +
                                   std::to_string(n2)};
            const auto terms = beamsplitter_output(n1, n2, 0.7);
            double total = 0.0;
            for (const BeamsplitterTerm& t : terms) total += std::norm(t.amp);
            if (std::abs(total - 1.0) > 1e-12)
                return {false, "output probabilities sum to " +
                                   fmt("%.14f", total)};
        }
    }
    return {true, "vacuum-fed full swap is exact; occupied inputs stay "
                  "below 1 - 1e-6; outputs normalized to 1e-12"};
}

// ---- criterion 11: conserved charge and canonical rotation ----

Outcome criterion_symmetry() {
    ModelParams p1;
    p1.m = 1;
    const double c1 = commutator_norm(p1, 8);
    if (c1 > 1e-12)
        return {false, "m=1 commutator norm " + fmt("%.2e", c1)};
    for (int m : {2, 3}) {
        ModelParams p;
        p.m = m;
        const double c = commutator_norm(p, 3 * m + 3);
        if (c < 1e-3)
            return {false, "m=" + std::to_string(m) +
                               " commutator norm only " + fmt("%.2e", c)};
    }

    // conjugation oracle vs closed-form coefficients at generic angles
    const double g1 = 0.75, g2 = 0.3;
    for (int m : {1, 2, 3}) {
        const double theta = 0.3 + 0.1 * m;
        double residual = -1.0;
        const std::vector<double> coef =
            decompose_interaction(g1, g2, m, theta, 2 * m + 3, &residual);
        if (residual > 1e-9)
            return {false, "conjugation residual " + fmt("%.2e", residual)};
        for (int k = 0; k <= m; ++k) {
            const double want = rotated_coefficient(g1, g2, m, k, theta);
            if (std::abs(coef[k] - want) > 1e-9)
                return {false, "coefficient mismatch at m=" +
                                   std::to_string(m) + " k=" +
                                   std::to_string(k)};
        }
    }

    // the solved angle cancels the second normal mode exactly
    for (int m : {1, 3}) {
        const CanonicalCouplings cc = canonical_couplings(0.9, 0.4, m);
        const double leftover = rotated_coefficient(0.9, 0.4, m, 0, cc.theta);
        if (std::abs(leftover) > 1e-12)
            return {false, "cancelled coupling still " +
                               fmt("%.2e", leftover) + " at m=" +
                               std::to_string(m)};
        double residual = -1.0;
        const std::vector<double> coef = decompose_interaction(
            0.9, 0.4, m, cc.theta, 2 * m + 3, &residual);
        if (residual > 1e-9 || std::abs(coef[0]) > 1e-9 ||
            std::abs(coef[m] - cc.g_tilde) > 1e-9)
            return {false,
                    "canonical decomposition off at m=" + std::to_string(m)};
    }
    return {true, "charge conserved only for m = 1; conjugation matches the "
                  "closed form within 1e-9; solved angle cancels its mode"};
}

// ---- criterion 12: reductions vs full-space partial traces ----

Outcome criterion_reductions() {
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m) {
        for (int n1 = 0; n1 <= 3; ++n1) {
            for (int n2 = 0; n2 <= 3; ++n2) {
                ModelParams p;
                p.n1 = n1;
                p.n2 = n2;
                p.m = m;
                p.phi = 0.6;
                p.delta = 0.3;
                const FullState s = full_state(p, 1.7);

                int top = 0;
                for (const BasisState& b : s.spec.x_states)
                    top = std::max({top, b.n1, b.n2});
                for (const BasisState& b : s.spec.y_states)
                    top = std::max({top, b.n1, b.n2});
                TensorSpace ts;
                ts.cutoff = top;
                const Eigen::VectorXcd psi = lift_state(ts, s);
                const Eigen::MatrixXcd rho = psi * psi.adjoint();

                for (int which = 1; which <= 2; ++which) {
                    const DensityMatrix lean = reduce_oscillator(s, which);
                    const DensityMatrix full =
                        partial_trace_oscillator(ts, rho, which);
                    for (int i = 0; i < full.dim(); ++i) {
                        for (int j = 0; j < full.dim(); ++j) {
                            complexd lv(0.0, 0.0);
                            const auto li =
                                std::find(lean.labels.begin(),
                                          lean.labels.end(), full.labels[i]);
                            const auto lj =
                                std::find(lean.labels.begin(),
                                          lean.labels.end(), full.labels[j]);
                            if (li != lean.labels.end() &&
                                lj != lean.labels.end())
                                lv = lean.rho(li - lean.labels.begin(),
                                              lj - lean.labels.begin());
                            worst = std::max(
                                worst, std::abs(lv - full.rho(i, j)));
                        }
                    }
                }
            }
        }
    }
    if (worst > 1e-10)
        return {false, "max element deviation " + fmt("%.2e", worst)};
    return {true,
            "48 parameter sets, max element deviation " + fmt("%.2e", worst)};
}

}  // namespace

int main() {
    std::printf("acceptance checks\n=================\n");
    run_criterion(1, "ladder enumeration matches brute-force reachability",
                  criterion_ladder_counts);
    run_criterion(2, "closed forms match the spectral engine on random draws",
                  criterion_engines_agree);
    run_criterion(3, "vacuum-target packet swap is perfect at t*",
                  criterion_perfect_swap);
    run_criterion(4, "skew-matched transfer with occupied targets",
                  criterion_asymmetric_transfer);
    run_criterion(5, "low exchange numbers keep the oscillator classical",
                  criterion_positivity);
    run_criterion(6, "three-photon exchange creates vacuum negativity",
                  criterion_vacuum_negativity);
    run_criterion(7, "balanced packets never beat their initial negativity",
                  criterion_no_enhancement);
    run_criterion(8, "number-state negativities match the dense oracle",
                  criterion_fock_baselines);
    run_criterion(9, "open-system traces are sane",
                  criterion_open_system);
    run_criterion(10, "beamsplitter reference distribution",
                  criterion_beamsplitter);
    run_criterion(11, "conserved charge and canonical rotation",
                  criterion_symmetry);
    run_criterion(12, "ladder reductions equal full-space partial traces",
                  criterion_reductions);

    if (g_failures == 0) {
        std::printf("=================\nall 12 criteria passed\n");
        return 0;
    }
    std::printf("=================\n%d criteria FAILED\n", g_failures);
    return 1;
}
