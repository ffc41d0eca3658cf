#pragma once

#include <Eigen/Dense>

#include "mpjc/ladder.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Model parameters and branch Hamiltonians
// ------------------------------------------------------------------
//
// Interaction-picture Hamiltonian (hbar = 1):
//
//   H = (Delta/2) sigma_z + g1 (a1^m sigma_+ + a1^dag^m sigma_-)
//                         + g2 (a2^m sigma_+ + a2^dag^m sigma_-)
//
// with two degenerate oscillators a1, a2, qubit detuning Delta, and the
// m-photon coupling strengths g1, g2. In the canonical ladder order of
// enumerate_basis() this operator is block-diagonal: one real symmetric
// pentadiagonal matrix per branch.

struct ModelParams {
    int n1 = 0;       // initial photons in oscillator 1
    int n2 = 0;       // initial photons in oscillator 2
    int m = 1;        // photons exchanged per qubit flip
    double g1 = 0.7071067811865476;  // oscillator-1 coupling (default 1/sqrt(2))
    double g2 = 0.7071067811865476;  // oscillator-2 coupling (default 1/sqrt(2))
    double delta = 0.0;              // qubit detuning Delta
    double phi = 0.0;                // initial superposition angle, see full_state()

    // Throws invalid_parameter if any field is out of range / non-finite.
    void validate() const;
};

// sqrt((n+m)! / n!): the bosonic matrix element <n+m| a^dag^m |n>.
// Computed as a running product (no factorials are formed); throws
// coupling_overflow if the value is not representable as a double.
double ladder_factor(int n, int m);

// Coupling strength g * sqrt((n_low+m)!/n_low!) between |e, ..n_low..> and
// |g, ..n_low+m..> on one oscillator.
double ladder_coupling(double g, int n_low, int m);

// Matrix element <a| H |b> for two ladder basis states (0 when uncoupled).
// Diagonal entries are +Delta/2 for qubit-excited and -Delta/2 for
// qubit-ground states.
double hamiltonian_element(const BasisState& a, const BasisState& b,
                           const ModelParams& p);

// The two branch Hamiltonians in the canonical order of `spec`.
struct CouplingMatrices {
    LadderSpec spec;
    Eigen::MatrixXd x;  // x_dim x x_dim, real symmetric, bandwidth <= 2
    Eigen::MatrixXd y;  // y_dim x y_dim, real symmetric, bandwidth <= 2
};

// Number of the farthest nonzero diagonal (0 for diagonal matrices).
int matrix_bandwidth(const Eigen::MatrixXd& m, double tol = 0.0);

// Build both branch matrices for p. Throws coupling_overflow when a ladder
// factor exceeds double range and invalid_parameter for bad p.
CouplingMatrices build_matrices(const ModelParams& p);

// Same, reusing an already-enumerated basis (must match p's n1, n2, m).
CouplingMatrices build_matrices(const LadderSpec& spec, const ModelParams& p);

}  // namespace mpjc
