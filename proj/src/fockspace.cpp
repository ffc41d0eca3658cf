#include "mpjc/fockspace.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

namespace mpjc {

SparseR annihilation_op(int cutoff) {
    require(cutoff >= 0, "annihilation_op: cutoff must be >= 0");
    SparseR a(cutoff + 1, cutoff + 1);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(cutoff);
    for (int k = 1; k <= cutoff; ++k)
        trips.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

SparseR annihilation_power(int cutoff, int m) {
    require(m >= 1, "annihilation_power: m must be >= 1");
    const SparseR a = annihilation_op(cutoff);
    SparseR out = a;
    for (int j = 1; j < m; ++j) out = (out * a).pruned();
    return out;
}

SparseR sigma_z_op() {
    SparseR s(2, 2);
    s.insert(0, 0) = -1.0;  // ground
    s.insert(1, 1) = 1.0;   // excited
    s.makeCompressed();
    return s;
}

SparseR sigma_plus_op() {
    SparseR s(2, 2);
    s.insert(1, 0) = 1.0;  // |e><g|
    s.makeCompressed();
    return s;
}

SparseR sigma_minus_op() {
    SparseR s(2, 2);
    s.insert(0, 1) = 1.0;  // |g><e|
    s.makeCompressed();
    return s;
}

SparseR identity_op(int n) {
    SparseR id(n, n);
    id.setIdentity();
    return id;
}

SparseR embed3(const TensorSpace& ts, const SparseR& qubit_op,
               const SparseR& op1, const SparseR& op2) {
    const int d = ts.osc_dim();
    require(qubit_op.rows() == 2 && qubit_op.cols() == 2,
            "embed3: qubit operator must be 2x2");
    require(op1.rows() == d && op1.cols() == d && op2.rows() == d &&
                op2.cols() == d,
            "embed3: oscillator operator size does not match the cutoff");
    SparseR pair = Eigen::kroneckerProduct(op1, op2).eval();
    SparseR out = Eigen::kroneckerProduct(qubit_op, pair).eval();
    out.makeCompressed();
    return out;
}

SparseR build_hamiltonian_full(const TensorSpace& ts, const ModelParams& p) {
    p.validate();
    const int d = ts.osc_dim();
    const SparseR id_o = identity_op(d);
    const SparseR am = annihilation_power(ts.cutoff, p.m);
    const SparseR sp = sigma_plus_op();

    SparseR h = embed3(ts, sp, p.g1 * am, id_o) + embed3(ts, sp, id_o, p.g2 * am);
    h = SparseR(h + SparseR(h.transpose()));
    if (p.delta != 0.0) h = h + SparseR(0.5 * p.delta * embed3(ts, sigma_z_op(), id_o, id_o));
    h.makeCompressed();
    return h;
}

Eigen::VectorXcd lift_state(const TensorSpace& ts, const FullState& state) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(ts.dim());
    auto put = [&](const std::vector<BasisState>& states,
                   const CoefficientVector& amps) {
        for (size_t i = 0; i < states.size(); ++i) {
            const BasisState& s = states[i];
            require(s.n1 <= ts.cutoff && s.n2 <= ts.cutoff,
                    "lift_state: ladder label " + to_string(s) +
                        " exceeds the tensor-space cutoff " +
                        std::to_string(ts.cutoff));
            v[ts.index(s.q, s.n1, s.n2)] = amps[static_cast<int>(i)];
        }
    };
    put(state.spec.x_states, state.x);
    put(state.spec.y_states, state.y);
    return v;
}

DensityMatrix partial_trace_oscillator(const TensorSpace& ts,
                                       const Eigen::MatrixXcd& rho_full,
                                       int which) {
    require(which == 1 || which == 2,
            "partial_trace_oscillator: oscillator index must be 1 or 2");
    require(rho_full.rows() == ts.dim() && rho_full.cols() == ts.dim(),
            "partial_trace_oscillator: density matrix does not match the "
            "tensor space");
    const int d = ts.osc_dim();
    DensityMatrix out;
    out.labels.resize(d);
    for (int k = 0; k < d; ++k) out.labels[k] = k;
    out.rho = Eigen::MatrixXcd::Zero(d, d);
    for (int q = 0; q < 2; ++q) {
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                complexd acc{0.0, 0.0};
                for (int j = 0; j < d; ++j) {
                    const int ra = (which == 1)
                                       ? ts.index(static_cast<Qubit>(q), a, j)
                                       : ts.index(static_cast<Qubit>(q), j, a);
                    const int cb = (which == 1)
                                       ? ts.index(static_cast<Qubit>(q), b, j)
                                       : ts.index(static_cast<Qubit>(q), j, b);
                    acc += rho_full(ra, cb);
                }
                out.rho(a, b) += acc;
            }
        }
    }
    return out;
}

double edge_population(const TensorSpace& ts, const Eigen::MatrixXcd& rho_full) {
    const int d = ts.osc_dim();
    double pop = 0.0;
    for (int q = 0; q < 2; ++q) {
        for (int k1 = 0; k1 < d; ++k1) {
            for (int k2 = 0; k2 < d; ++k2) {
                if (k1 != ts.cutoff && k2 != ts.cutoff) continue;
                pop += rho_full(ts.index(static_cast<Qubit>(q), k1, k2),
                                ts.index(static_cast<Qubit>(q), k1, k2))
                           .real();
            }
        }
    }
    return pop;
}

}  // namespace mpjc
