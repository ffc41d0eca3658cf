#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mpjc/dynamics.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Reduced oscillator states
// ------------------------------------------------------------------

// Density matrix of one oscillator on the (sparse) set of Fock labels it can
// occupy. labels[i] is the photon number of row/column i, strictly ascending.
struct DensityMatrix {
    std::vector<int> labels;
    Eigen::MatrixXcd rho;

    int dim() const { return static_cast<int>(labels.size()); }
    double trace_real() const { return rho.trace().real(); }
    int max_label() const { return labels.empty() ? 0 : labels.back(); }
};

// Trace out the qubit and the other oscillator from a pure ladder state.
// which = 1 or 2 selects the oscillator that is kept.
DensityMatrix reduce_oscillator(const FullState& state, int which);

// Tr(rho^2); equals 1 for pure states, 1/d at maximal mixing.
double purity(const DensityMatrix& dm);

// Largest violation of the physicality requirements (Hermiticity, unit
// trace, positive semidefiniteness); tests assert this stays tiny.
double physicality_defect(const DensityMatrix& dm);

}  // namespace mpjc
