#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mpjc/dynamics.hpp"
#include "mpjc/states.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Truncated tripartite tensor space
// ------------------------------------------------------------------
//
// Flat ordering |q, k1, k2> -> q * d^2 + k1 * d + k2 with d = cutoff + 1 and
// q = 0 (ground), 1 (excited). Used for the open-system evolution, the
// symmetry checks, and as an independent oracle for the ladder picture.

using SparseR = Eigen::SparseMatrix<double>;
using SparseC = Eigen::SparseMatrix<complexd>;

struct TensorSpace {
    int cutoff = 0;  // highest Fock level kept on each oscillator

    int osc_dim() const { return cutoff + 1; }
    int dim() const { return 2 * osc_dim() * osc_dim(); }

    int index(Qubit q, int k1, int k2) const {
        const int d = osc_dim();
        return static_cast<int>(q) * d * d + k1 * d + k2;
    }
    BasisState unpack(int idx) const {
        const int d = osc_dim();
        BasisState s;
        s.q = static_cast<Qubit>(idx / (d * d));
        s.n1 = (idx / d) % d;
        s.n2 = idx % d;
        return s;
    }
};

// Single-mode annihilation operator on Fock levels 0..cutoff.
SparseR annihilation_op(int cutoff);

// a^m on Fock levels 0..cutoff (sparse power of annihilation_op).
SparseR annihilation_power(int cutoff, int m);

// Qubit operators in the (ground, excited) ordering.
SparseR sigma_z_op();
SparseR sigma_plus_op();
SparseR sigma_minus_op();
SparseR identity_op(int n);

// kron(qubit_op, kron(op1, op2)) on the flat ordering above.
SparseR embed3(const TensorSpace& ts, const SparseR& qubit_op,
               const SparseR& op1, const SparseR& op2);

// Full truncated Hamiltonian of the model on the tensor space.
SparseR build_hamiltonian_full(const TensorSpace& ts, const ModelParams& p);

// Ladder state -> tensor-space vector. Requires every ladder label to fit
// under the cutoff (invalid_parameter otherwise).
Eigen::VectorXcd lift_state(const TensorSpace& ts, const FullState& state);

// Reduced state of oscillator 1 or 2 from a full density matrix
// (labels 0..cutoff, dense).
DensityMatrix partial_trace_oscillator(const TensorSpace& ts,
                                       const Eigen::MatrixXcd& rho_full,
                                       int which);

// Population of the truncation edge (either oscillator at level == cutoff):
// the leakage monitor for open-system runs.
double edge_population(const TensorSpace& ts, const Eigen::MatrixXcd& rho_full);

}  // namespace mpjc
