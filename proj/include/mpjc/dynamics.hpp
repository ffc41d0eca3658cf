#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "mpjc/hamiltonian.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Unitary dynamics on the excitation ladders
// ------------------------------------------------------------------
//
// The initial state cos(phi)|g, n1, n2> + sin(phi)|e, n1, n2> evolves inside
// the two ladders independently: i dX/dt = Mx X with X(0) = (cos phi, 0, ...)
// and i dY/dt = My Y with Y(0) = (sin phi, 0, ...). Amplitudes are reported
// in the canonical enumeration order.

using CoefficientVector = Eigen::VectorXcd;
using complexd = std::complex<double>;

// Spectral propagator for one real symmetric branch matrix. Construct once,
// evaluate at many times; cost per evaluation is two dense mat-vec products.
class Propagator {
  public:
    explicit Propagator(const Eigen::MatrixXd& m);

    // exp(-i m t) c0
    CoefficientVector at(const CoefficientVector& c0, double t) const;

    // exp(-i m t) e_0 * amp (the ladder-seed special case).
    CoefficientVector from_seed(double amp, double t) const;

    int dim() const { return static_cast<int>(evals_.size()); }

  private:
    Eigen::VectorXd evals_;
    Eigen::MatrixXd evecs_;
};

// One-shot spectral evolution exp(-i m t) c0 with a unitarity check
// (norm drift beyond 1e-10 raises hermiticity_violation).
CoefficientVector evolve_numeric(const Eigen::MatrixXd& m,
                                 const CoefficientVector& c0, double t);

// ------------------------------------------------------------------
// Closed-form branch solutions
// ------------------------------------------------------------------
//
// Each analytic routine checks that the parameters actually belong to the
// ladder case it solves (else case_mismatch) and that its validity
// conditions hold (else analytic_domain). Returned vectors follow the
// canonical enumeration order of the branch.

// Case 1 (n1 < m, n2 < m), any detuning: both branches.
CoefficientVector analytic_case1_x(const ModelParams& p, double t);
CoefficientVector analytic_case1_y(const ModelParams& p, double t);

// Case 2 (one oscillator exactly at m), any detuning: x branch (3 states).
CoefficientVector analytic_case2_x(const ModelParams& p, double t);

// Case 2 y branch (5 states), resonant qubit only (delta != 0 raises
// analytic_domain).
CoefficientVector analytic_case2_y(const ModelParams& p, double t);

// Case 3 (n1 = n2 = m) x branch (5 states), resonant qubit only.
CoefficientVector analytic_case3_x(const ModelParams& p, double t);

// ------------------------------------------------------------------
// Full-state assembly
// ------------------------------------------------------------------

enum class EnginePath {
    numeric,   // spectral propagator on both branches
    analytic,  // closed forms on both branches (error when unavailable)
    automatic, // closed forms where valid, spectral otherwise
};

EnginePath engine_path_from_string(const std::string& name);
const char* to_string(EnginePath path) noexcept;

// Joint pure state at time t, split by branch.
struct FullState {
    LadderSpec spec;
    CoefficientVector x;  // amplitudes on spec.x_states
    CoefficientVector y;  // amplitudes on spec.y_states
    double t = 0.0;
    std::string x_path;   // "analytic" or "numeric" (as used)
    std::string y_path;

    double norm_sq() const { return x.squaredNorm() + y.squaredNorm(); }
};

// Evolve the standard initial state to time t along the requested path.
// engine = analytic raises analytic_domain when no closed form covers the
// branch; engine = automatic falls back to the spectral propagator.
FullState full_state(const ModelParams& p, double t,
                     EnginePath engine = EnginePath::automatic);

// Batch version sharing one spectral decomposition across all times.
std::vector<FullState> full_states(const ModelParams& p,
                                   const std::vector<double>& times,
                                   EnginePath engine = EnginePath::automatic);

}  // namespace mpjc
