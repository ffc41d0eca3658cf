#include <cmath>
#include <vector>

#include "doctest.h"
#include "mpjc/lindblad.hpp"
#include "mpjc/states.hpp"

using namespace mpjc;

namespace {

// Oscillator-1 reduced state from the closed (ladder) evolution, lifted to
// the dense picture for comparisons with the open solver.
DensityMatrix closed_reduced(const ModelParams& p, double t, int which) {
    return reduce_oscillator(full_state(p, t), which);
}

double fock_population(const DensityMatrix& dm, int n) {
    for (int i = 0; i < dm.dim(); ++i) {
        if (dm.labels[i] == n) return dm.rho(i, i).real();
    }
    return 0.0;
}

}  // namespace

TEST_CASE("configuration validation") {
    LindbladConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    LindbladConfig bad = cfg;
    bad.lambda_r = -0.1;
    CHECK_THROWS_AS(bad.validate(), error);

    bad = cfg;
    bad.nbar = -0.5;
    CHECK_THROWS_AS(bad.validate(), error);

    bad = cfg;
    bad.rtol = 1.0;  // outside the supported band
    CHECK_THROWS_AS(bad.validate(), error);

    bad = cfg;
    bad.cutoff = 0;
    CHECK_THROWS_AS(bad.validate(), error);

    ModelParams p;
    p.n1 = 1;
    p.n2 = 2;
    p.m = 2;
    CHECK(LindbladConfig{}.resolve_cutoff(p) == 2 + 3 * 2 + 2);
}

TEST_CASE("collapse operators appear only with nonzero rates") {
    TensorSpace ts;
    ts.cutoff = 4;

    LindbladConfig off;
    CHECK(build_lindblad_ops(ts, off).empty());

    LindbladConfig damp;
    damp.lambda_r = 0.1;
    const auto ops_damp = build_lindblad_ops(ts, damp);
    CHECK(ops_damp.size() == 3);  // a1, a2, sigma_-

    LindbladConfig thermal = damp;
    thermal.nbar = 0.2;
    const auto ops_thermal = build_lindblad_ops(ts, thermal);
    CHECK(ops_thermal.size() == 6);  // + a1^dag, a2^dag, sigma_+

    LindbladConfig full = thermal;
    full.lambda_d = 0.05;
    const auto ops_full = build_lindblad_ops(ts, full);
    CHECK(ops_full.size() == 9);  // + two number operators and sigma_z
    for (const LindbladOp& op : ops_full) {
        CHECK(op.rate > 0.0);
        CHECK(op.op.rows() == ts.dim());
    }
}

TEST_CASE("zero-rate master equation reproduces the unitary dynamics") {
    ModelParams p;
    p.m = 2;
    p.phi = 0.7;
    LindbladConfig cfg;  // all rates zero
    cfg.rtol = 1e-10;
    cfg.atol = 1e-14;

    const std::vector<double> times{0.0, 0.8, 2.1};
    const MasterResult res = evolve_master(p, cfg, times);
    REQUIRE(res.states.size() == times.size());
    CHECK(res.max_trace_drift < 1e-9);
    CHECK_FALSE(res.leak_warning);

    for (size_t i = 0; i < times.size(); ++i) {
        const DensityMatrix open_red =
            partial_trace_oscillator(res.space, res.states[i], 1);
        const DensityMatrix closed = closed_reduced(p, times[i], 1);
        double err = 0.0;
        for (int a = 0; a < closed.dim(); ++a) {
            for (int b = 0; b < closed.dim(); ++b) {
                const int la = closed.labels[a], lb = closed.labels[b];
                err = std::max(err, std::abs(closed.rho(a, b) -
                                             open_red.rho(la, lb)));
            }
        }
        CAPTURE(times[i]);
        CHECK(err < 1e-7);
    }
}

TEST_CASE("trace and Hermiticity are preserved under damping") {
    ModelParams p;
    p.m = 1;
    p.phi = 1.2;
    LindbladConfig cfg;
    cfg.lambda_r = 0.2;
    cfg.nbar = 0.1;
    cfg.lambda_d = 0.05;

    const std::vector<double> times{0.0, 1.0, 4.0};
    const MasterResult res = evolve_master(p, cfg, times);
    CHECK(res.max_trace_drift < 1e-8);
    CHECK(res.max_hermiticity_drift < 1e-8);
    CHECK(res.steps_accepted > 0);
    for (const Eigen::MatrixXcd& rho : res.states) {
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-8);
        CHECK((rho - rho.adjoint()).norm() < 1e-10);
    }
}

TEST_CASE("photon loss empties the oscillator") {
    // start with one packet in oscillator 2 and let everything decay
    ModelParams p;
    p.n2 = 1;
    p.m = 1;
    p.phi = 0.0;
    LindbladConfig cfg;
    cfg.lambda_r = 0.5;

    const std::vector<double> times{0.0, 2.0, 12.0};
    const MasterResult res = evolve_master(p, cfg, times);
    const DensityMatrix early =
        partial_trace_oscillator(res.space, res.states[1], 2);
    const DensityMatrix late =
        partial_trace_oscillator(res.space, res.states[2], 2);
    CHECK(fock_population(early, 0) > 0.3);
    CHECK(fock_population(late, 0) > 0.99);
}

TEST_CASE("thermal environment raises the steady occupation") {
    ModelParams p;
    p.m = 1;
    p.phi = 0.0;
    LindbladConfig hot;
    hot.lambda_r = 0.4;
    hot.nbar = 0.3;

    const std::vector<double> times{0.0, 20.0};
    const MasterResult res = evolve_master(p, hot, times);
    const DensityMatrix dm =
        partial_trace_oscillator(res.space, res.states[1], 1);
    double mean = 0.0;
    for (int i = 0; i < dm.dim(); ++i) {
        mean += dm.labels[i] * dm.rho(i, i).real();
    }
    // approaches nbar (the qubit keeps exchanging, so allow a wide band)
    CHECK(mean > 0.1);
    CHECK(mean < 0.6);
}

TEST_CASE("tiny truncation leaks and says so") {
    ModelParams p;
    p.n2 = 2;
    p.m = 2;
    p.phi = 0.0;
    LindbladConfig cfg;
    cfg.lambda_r = 0.1;
    cfg.nbar = 0.4;   // heating pushes population upward
    cfg.cutoff = 3;   // far too small
    cfg.leak_tol = 1e-9;

    const std::vector<double> times{0.0, 3.0};
    SUBCASE("non-strict records a warning") {
        cfg.strict = false;
        const MasterResult res = evolve_master(p, cfg, times);
        CHECK(res.leak_warning);
        CHECK(res.max_leakage > cfg.leak_tol);
    }
    SUBCASE("strict raises") {
        cfg.strict = true;
        CHECK_THROWS_AS(evolve_master(p, cfg, times), error);
        try {
            evolve_master(p, cfg, times);
        } catch (const error& e) {
            CHECK(e.kind() == errc::truncation_overflow);
        }
    }
}

TEST_CASE("time grid validation") {
    ModelParams p;
    LindbladConfig cfg;
    CHECK_THROWS_AS(evolve_master(p, cfg, {1.0, 0.5}), error);   // descending
    CHECK_THROWS_AS(evolve_master(p, cfg, {-1.0, 0.5}), error);  // negative
    CHECK_THROWS_AS(evolve_master(p, cfg, {}), error);           // empty
}

TEST_CASE("open-system swap fidelity degrades smoothly with loss") {
    ModelParams p;
    p.n1 = 0;
    p.n2 = 2;
    p.m = 2;
    p.phi = 0.0;
    p.g1 = p.g2 = 1.0 / std::sqrt(2.0);
    const double t_star = 3.14159265358979323846 / std::sqrt(2.0);

    LindbladConfig closed;
    closed.rtol = 1e-10;
    const double f0 = fock_swap_fidelity_open(p, closed, t_star);
    CHECK(f0 > 1.0 - 1e-6);

    LindbladConfig lossy;
    lossy.lambda_r = 0.05;
    const double f1 = fock_swap_fidelity_open(p, lossy, t_star);
    CHECK(f1 < f0);
    CHECK(f1 > 0.5);

    // the helper is specific to the one-packet transfer layout
    ModelParams wrong = p;
    wrong.n2 = 1;
    CHECK_THROWS_AS(fock_swap_fidelity_open(wrong, closed, t_star), error);
    wrong = p;
    wrong.phi = 0.3;
    CHECK_THROWS_AS(fock_swap_fidelity_open(wrong, closed, t_star), error);
}
