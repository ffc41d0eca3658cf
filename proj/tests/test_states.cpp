#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mpjc/fockspace.hpp"
#include "mpjc/states.hpp"

using namespace mpjc;

TEST_CASE("two-level exchange gives the textbook reduced state") {
    // |e,0,0> with only oscillator 1 coupled (m = 1) Rabi-flops with
    // |g,1,0>; the reduced state of oscillator 1 is then diagonal.
    ModelParams p;
    p.m = 1;
    p.g1 = 1.0;
    p.g2 = 0.0;
    p.phi = 1.5707963267948966;  // start fully excited

    const double t = 0.7;
    const FullState s = full_state(p, t);
    const DensityMatrix dm = reduce_oscillator(s, 1);

    const double c2 = std::cos(t) * std::cos(t);
    REQUIRE(dm.dim() == 2);
    CHECK(dm.labels[0] == 0);
    CHECK(dm.labels[1] == 1);
    CHECK(dm.rho(0, 0).real() == doctest::Approx(c2).epsilon(1e-12));
    CHECK(dm.rho(1, 1).real() == doctest::Approx(1.0 - c2).epsilon(1e-12));
    CHECK(std::abs(dm.rho(0, 1)) < 1e-12);  // qubit tags the branch
    CHECK(dm.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(dm) ==
          doctest::Approx(c2 * c2 + (1 - c2) * (1 - c2)).epsilon(1e-12));
    CHECK(physicality_defect(dm) < 1e-12);

    // the uncoupled oscillator stays in vacuum
    const DensityMatrix dm2 = reduce_oscillator(s, 2);
    REQUIRE(dm2.dim() >= 1);
    CHECK(dm2.labels[0] == 0);
    CHECK(dm2.rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(dm2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("superposition seeds produce coherences within one qubit sector") {
    // cos(phi)|g,0,0> + sin(phi)|e,0,0> with m = 1: the |g,1,0> amplitude
    // interferes with the stationary |g,0,0> one.
    ModelParams p;
    p.m = 1;
    p.phi = 0.6;
    const FullState s = full_state(p, 1.2);
    const DensityMatrix dm = reduce_oscillator(s, 1);
    REQUIRE(dm.dim() == 2);
    CHECK(std::abs(dm.rho(0, 1)) > 1e-3);
    CHECK(physicality_defect(dm) < 1e-12);
    CHECK(dm.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("labels are the occupations actually reachable") {
    ModelParams p;
    p.n1 = 1;
    p.n2 = 3;
    p.m = 3;
    p.phi = 0.8;
    const FullState s = full_state(p, 2.0);

    const DensityMatrix d1 = reduce_oscillator(s, 1);
    CHECK(d1.labels == std::vector<int>{1, 4, 7});  // 1, 1+m, 1+2m

    const DensityMatrix d2 = reduce_oscillator(s, 2);
    CHECK(d2.labels == std::vector<int>{0, 3, 6});  // 3-m, 3, 3+m
    CHECK(d2.max_label() == 6);
}

TEST_CASE("purity bounds and maximally mixed normalization") {
    DensityMatrix dm;
    dm.labels = {0, 1};
    dm.rho = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
    CHECK(purity(dm) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(physicality_defect(dm) < 1e-15);
}

TEST_CASE("physicality_defect flags broken inputs") {
    DensityMatrix dm;
    dm.labels = {0, 1};
    dm.rho = Eigen::MatrixXcd::Zero(2, 2);
    dm.rho(0, 0) = 1.2;           // trace off by 0.2
    dm.rho(1, 1) = -0.2;          // negative eigenvalue
    CHECK(physicality_defect(dm) >= 0.2 - 1e-12);

    DensityMatrix herm;
    herm.labels = {0, 1};
    herm.rho = Eigen::MatrixXcd::Zero(2, 2);
    herm.rho(0, 0) = 1.0;
    herm.rho(0, 1) = complexd(0.0, 0.3);  // not matched below the diagonal
    CHECK(physicality_defect(herm) >= 0.3 - 1e-12);
}

TEST_CASE("reduction agrees with the tensor-space partial trace") {
    // Cross-check the sparse-label reduction against the dense full-space
    // construction on a mixed-case draw.
    ModelParams p;
    p.n1 = 2;
    p.n2 = 1;
    p.m = 2;
    p.phi = 0.5;
    p.delta = 0.3;
    const FullState s = full_state(p, 4.2);

    int max_label = 0;
    for (const BasisState& b : s.spec.x_states) {
        max_label = std::max({max_label, b.n1, b.n2});
    }
    for (const BasisState& b : s.spec.y_states) {
        max_label = std::max({max_label, b.n1, b.n2});
    }
    TensorSpace ts;
    ts.cutoff = max_label;
    const Eigen::VectorXcd psi = lift_state(ts, s);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const Eigen::MatrixXcd rho_full = psi * psi.adjoint();

    for (int which = 1; which <= 2; ++which) {
        const DensityMatrix lean = reduce_oscillator(s, which);
        const DensityMatrix full =
            partial_trace_oscillator(ts, rho_full, which);
        // every populated label of the dense answer appears in the lean one
        double err = 0.0;
        for (int i = 0; i < full.dim(); ++i) {
            for (int j = 0; j < full.dim(); ++j) {
                const auto li = std::find(lean.labels.begin(),
                                          lean.labels.end(), full.labels[i]);
                const auto lj = std::find(lean.labels.begin(),
                                          lean.labels.end(), full.labels[j]);
                complexd lean_v(0.0, 0.0);
                if (li != lean.labels.end() && lj != lean.labels.end()) {
                    lean_v = lean.rho(li - lean.labels.begin(),
                                      lj - lean.labels.begin());
                }
                err = std::max(err, std::abs(lean_v - full.rho(i, j)));
            }
        }
        CAPTURE(which);
        CHECK(err < 1e-12);
    }
}
