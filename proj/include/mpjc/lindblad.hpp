#pragma once

#include <string>
#include <vector>

#include "mpjc/fockspace.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Open-system evolution (GKSL master equation)
// ------------------------------------------------------------------
//
//   d rho/dt = -i [H, rho]
//            + sum_k lambda_k ( A_k rho A_k^dag - 1/2 {A_k^dag A_k, rho} )
//
// with the standard damping/heating/dephasing set on both oscillators and
// the qubit:
//   rate lambda_r (1 + nbar):  a1, a2, sigma_-
//   rate lambda_r nbar      :  a1^dag, a2^dag, sigma_+
//   rate lambda_d           :  a1^dag a1, a2^dag a2, sigma_z

struct LindbladConfig {
    double lambda_r = 0.0;  // relaxation-rate prefactor
    double nbar = 0.0;      // thermal occupation of the environment
    double lambda_d = 0.0;  // dephasing-rate prefactor
    int cutoff = -1;        // Fock truncation per oscillator; -1 = automatic
    bool strict = false;    // raise (vs record) on truncation leakage
    double rtol = 1e-8;     // relative step tolerance
    double atol = 1e-12;    // absolute step tolerance
    double leak_tol = 1e-6;   // admissible edge-band population
    double trace_tol = 1e-6;  // trace drift that counts as integrator failure

    void validate() const;

    // cutoff, resolving -1 to max(n1, n2) + 3m + 2.
    int resolve_cutoff(const ModelParams& p) const;
};

struct LindbladOp {
    std::string name;
    double rate;
    SparseR op;
};

// The collapse operators with nonzero rates, embedded on the tensor space.
std::vector<LindbladOp> build_lindblad_ops(const TensorSpace& ts,
                                           const LindbladConfig& cfg);

struct MasterResult {
    TensorSpace space;
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;  // rho at each requested time
    double max_trace_drift = 0.0;
    double max_hermiticity_drift = 0.0;
    double max_leakage = 0.0;   // edge-band population high-water mark
    bool leak_warning = false;  // leakage exceeded leak_tol in non-strict mode
    long steps_accepted = 0;
    long steps_rejected = 0;
};

// Integrate the master equation from the standard initial state
// cos(phi)|g,n1,n2> + sin(phi)|e,n1,n2> over the ascending time grid.
// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)); Hermiticity is
// restored by symmetrization each accepted step after a drift assertion.
MasterResult evolve_master(const ModelParams& p, const LindbladConfig& cfg,
                           const std::vector<double>& times);

// <n1+m| rho_1(t) |n1+m> for the transfer scenario (n2 = m, phi = 0) under
// open evolution: the open-system swap fidelity.
double fock_swap_fidelity_open(const ModelParams& p, const LindbladConfig& cfg,
                               double t);

}  // namespace mpjc
