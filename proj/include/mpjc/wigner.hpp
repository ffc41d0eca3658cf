#pragma once

#include <complex>
#include <vector>

#include "mpjc/states.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Wigner functions and negativity volumes
// ------------------------------------------------------------------
//
// Conventions: W(alpha) = (1/pi) Tr[rho T(alpha)] with T the displaced
// parity operator, normalised so that  integral W d^2alpha = 1. The
// negativity volume is V = -integral min[W, 0] d^2alpha, which is invariant
// under the rescaling to quadrature variables.

// Associated Laguerre polynomial L_n^a(x) by the three-term upward
// recurrence (n >= 0, a >= 0).
double laguerre_assoc(int n, int a, double x);

// Displaced-parity matrix element <k1| T(alpha) |k2>.
complexd t_matrix_element(int k1, int k2, complexd alpha);

// Reusable evaluator: precomputes the label pairing of a density matrix so
// repeated phase-space evaluations stay allocation-free.
class WignerEvaluator {
  public:
    explicit WignerEvaluator(DensityMatrix dm);

    // W(alpha); raises hermiticity_violation if the trace acquires an
    // imaginary residue above 1e-10 (non-Hermitian input).
    double operator()(complexd alpha) const;

    const DensityMatrix& dm() const { return dm_; }
    int max_label() const { return dm_.max_label(); }

  private:
    struct Pair {
        int da;          // label difference (0 for diagonal terms)
        int k_min;       // smaller label
        double factor;   // 2 (-1)^k_min sqrt(k_min!/k_max!)
        complexd r_lo;   // rho(i, j) with label_i <= label_j
        complexd r_hi;   // rho(j, i)
    };
    DensityMatrix dm_;
    std::vector<Pair> pairs_;
    int max_da_ = 0;
    mutable std::vector<complexd> powers_;  // scratch: (2 alpha)^d
};

// One-shot W(alpha) for a density matrix.
double wigner_at(const DensityMatrix& dm, complexd alpha);

// Rigorous bound on integral |W| d^2alpha outside radius R, from the
// Gaussian envelope of the displaced parity kernel.
double wigner_tail_bound(const DensityMatrix& dm, double radius);

struct QuadratureOptions {
    double tol = 1e-6;        // absolute tolerance on the volume
    int max_depth = 12;       // panel bisection depth limit
    long max_evaluations = 50000000;
    double radial_panel = 1.0;  // initial radial panel width
    int theta_panels = 8;       // minimum initial angular panels
};

struct NegativityResult {
    double volume = 0.0;       // -integral min[W,0] d^2alpha
    double abs_error = 0.0;    // accumulated error estimate + tail bound
    long evaluations = 0;      // W evaluations performed
    double radius = 0.0;       // integration radius actually used
};

// Adaptive polar quadrature of the negative part of W. Deterministic
// (fixed panel ordering, compensated accumulation); raises
// quadrature_failure if the tolerance cannot be certified.
NegativityResult negativity_volume(const DensityMatrix& dm,
                                   const QuadratureOptions& opts = {});
NegativityResult negativity_volume(const DensityMatrix& dm, double tol);

// Closed-form W of one oscillator for the boundary cases (1, 2, 3),
// assembled from the branch amplitudes; raises case_mismatch otherwise.
// Matches wigner_at(reduce_oscillator(state, which), alpha) to ~1e-12.
double wigner_closed_form(const FullState& state, int which, complexd alpha);

}  // namespace mpjc
