#include "mpjc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mpjc {

void ModelParams::validate() const {
    require(m >= 1, "ModelParams: m must be >= 1, got " + std::to_string(m));
    require(n1 >= 0 && n2 >= 0, "ModelParams: photon numbers must be >= 0");
    require(std::isfinite(g1) && std::isfinite(g2) && g1 >= 0.0 && g2 >= 0.0,
            "ModelParams: couplings must be finite and >= 0");
    require(std::isfinite(delta), "ModelParams: detuning must be finite");
    require(std::isfinite(phi), "ModelParams: phi must be finite");
}

double ladder_factor(int n, int m) {
    require(n >= 0, "ladder_factor: photon number must be >= 0");
    require(m >= 1, "ladder_factor: m must be >= 1");
    // (n+m)!/n! = (n+1)(n+2)...(n+m), accumulated in double precision. The
    // result is exact until it leaves the 2^53 integer window and keeps full
    // relative precision well beyond that; guard the square against overflow.
    double ratio = 1.0;
    const double limit = std::numeric_limits<double>::max();
    for (int j = 1; j <= m; ++j) {
        ratio *= static_cast<double>(n + j);
        if (ratio > limit / (static_cast<double>(n + m) + 1.0))
            fail(errc::coupling_overflow,
                 "ladder_factor: sqrt((n+m)!/n!) overflows double for n=" +
                     std::to_string(n) + ", m=" + std::to_string(m));
    }
    return std::sqrt(ratio);
}

double ladder_coupling(double g, int n_low, int m) {
    return g * ladder_factor(n_low, m);
}

namespace {

// If a and b are connected by one m-photon exchange on oscillator `osc`
// (1 or 2), return the lower occupation number on that oscillator; else -1.
int exchange_low(const BasisState& a, const BasisState& b, int osc, int m) {
    if (a.q == b.q) return -1;
    const int da1 = a.n1 - b.n1;
    const int da2 = a.n2 - b.n2;
    if (osc == 1) {
        if (da2 != 0 || std::abs(da1) != m) return -1;
        // The qubit-ground state must hold the extra m photons.
        const BasisState& high = (da1 > 0) ? a : b;
        if (high.q != Qubit::ground) return -1;
        return std::min(a.n1, b.n1);
    }
    if (da1 != 0 || std::abs(da2) != m) return -1;
    const BasisState& high = (da2 > 0) ? a : b;
    if (high.q != Qubit::ground) return -1;
    return std::min(a.n2, b.n2);
}

}  // namespace

double hamiltonian_element(const BasisState& a, const BasisState& b,
                           const ModelParams& p) {
    if (a == b) return (a.q == Qubit::excited) ? 0.5 * p.delta : -0.5 * p.delta;
    if (int low = exchange_low(a, b, 1, p.m); low >= 0)
        return ladder_coupling(p.g1, low, p.m);
    if (int low = exchange_low(a, b, 2, p.m); low >= 0)
        return ladder_coupling(p.g2, low, p.m);
    return 0.0;
}

int matrix_bandwidth(const Eigen::MatrixXd& m, double tol) {
    int band = 0;
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > tol) band = std::max(band, std::abs(i - j));
    return band;
}

namespace {

Eigen::MatrixXd build_branch(const std::vector<BasisState>& states,
                             const ModelParams& p) {
    const int n = static_cast<int>(states.size());
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        mat(i, i) = hamiltonian_element(states[i], states[i], p);
        for (int j = i + 1; j < n; ++j) {
            const double v = hamiltonian_element(states[i], states[j], p);
            mat(i, j) = v;
            mat(j, i) = v;
        }
    }
    return mat;
}

}  // namespace

CouplingMatrices build_matrices(const LadderSpec& spec, const ModelParams& p) {
    p.validate();
    require(spec.n1 == p.n1 && spec.n2 == p.n2 && spec.m == p.m,
            "build_matrices: basis enumeration does not match parameters");

    CouplingMatrices out{spec, build_branch(spec.x_states, p),
                         build_branch(spec.y_states, p)};

    // Canonical-order structural invariant; a violation means the
    // enumeration and the couplings disagree, which must never ship.
    if (matrix_bandwidth(out.x) > 2 || matrix_bandwidth(out.y) > 2)
        fail(errc::invalid_parameter,
             "build_matrices: branch matrix is not pentadiagonal in "
             "canonical order (internal inconsistency)");
    return out;
}

CouplingMatrices build_matrices(const ModelParams& p) {
    p.validate();
    return build_matrices(enumerate_basis(p.n1, p.n2, p.m), p);
}

}  // namespace mpjc
