#include "mpjc/states.hpp"

#include <algorithm>
#include <cmath>

namespace mpjc {

namespace {

struct Component {
    int kept;    // Fock label of the oscillator that is kept
    int other;   // Fock label of the traced-out oscillator
    Qubit q;
    complexd amp;
};

}  // namespace

DensityMatrix reduce_oscillator(const FullState& state, int which) {
    require(which == 1 || which == 2,
            "reduce_oscillator: oscillator index must be 1 or 2");

    // Flatten both branches into one component list; the joint state is a
    // single pure state, so cross-branch interference terms matter whenever
    // two components agree on the qubit and the traced-out oscillator.
    std::vector<Component> comps;
    comps.reserve(state.spec.total_dim());
    auto add_branch = [&](const std::vector<BasisState>& states,
                          const CoefficientVector& amps) {
        for (size_t i = 0; i < states.size(); ++i) {
            const BasisState& s = states[i];
            const int kept = (which == 1) ? s.n1 : s.n2;
            const int other = (which == 1) ? s.n2 : s.n1;
            comps.push_back({kept, other, s.q, amps[static_cast<int>(i)]});
        }
    };
    add_branch(state.spec.x_states, state.x);
    add_branch(state.spec.y_states, state.y);

    DensityMatrix out;
    for (const Component& c : comps) out.labels.push_back(c.kept);
    std::sort(out.labels.begin(), out.labels.end());
    out.labels.erase(std::unique(out.labels.begin(), out.labels.end()),
                     out.labels.end());

    auto index_of = [&](int label) {
        return static_cast<int>(
            std::lower_bound(out.labels.begin(), out.labels.end(), label) -
            out.labels.begin());
    };

    out.rho = Eigen::MatrixXcd::Zero(out.dim(), out.dim());
    for (const Component& a : comps)
        for (const Component& b : comps)
            if (a.q == b.q && a.other == b.other)
                out.rho(index_of(a.kept), index_of(b.kept)) +=
                    a.amp * std::conj(b.amp);
    return out;
}

double purity(const DensityMatrix& dm) {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return dm.rho.squaredNorm();
}

double physicality_defect(const DensityMatrix& dm) {
    double defect = (dm.rho - dm.rho.adjoint().eval()).cwiseAbs().maxCoeff();
    defect = std::max(defect, std::abs(dm.trace_real() - 1.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        0.5 * (dm.rho + dm.rho.adjoint().eval()));
    if (solver.info() != Eigen::Success)
        fail(errc::eigensolver_failure,
             "physicality_defect: eigendecomposition did not converge");
    const double lambda_min = solver.eigenvalues().minCoeff();
    if (lambda_min < 0.0) defect = std::max(defect, -lambda_min);
    return defect;
}

}  // namespace mpjc
