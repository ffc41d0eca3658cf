#pragma once

#include <vector>

#include "mpjc/fockspace.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Symmetry analysis of the interaction
// ------------------------------------------------------------------
//
// For m = 1 the model conserves the quadratic mode observable
//   C = gt2^2 a1'a1 + gt1^2 a2'a2 - gt1 gt2 (a1'a2 + a2'a1),
// with gt_j = g_j / sqrt(g1^2 + g2^2); for m > 1 it does not, and no
// two-mode rotation can decouple one oscillator from the qubit. Both
// statements are checked numerically on truncated Fock spaces, restricted
// to interior labels so that truncation artifacts cannot contribute.

// Frobenius norm of [H, C] over the interior block (both oscillator labels
// <= cutoff - m on rows and columns). Zero (to rounding) iff m = 1 or one
// coupling vanishes. Requires cutoff >= 3m + 3.
double commutator_norm(const ModelParams& p, int cutoff);

// Result of rotating the interaction into normal modes
// b1 = cos(theta) a1 - sin(theta) a2, b2 = sin(theta) a1 + cos(theta) a2:
// the b2-only coupling is cancelled by the choice of theta, leaving a
// b1-only coupling g_tilde plus m-1 genuinely tripartite cross couplings.
struct CanonicalCouplings {
    double theta = 0.0;              // rotation angle cancelling the b2 term
    double g_tilde = 0.0;            // surviving b1^m coupling
    std::vector<double> tripartite;  // b1^k b2^{m-k} couplings, k = 1..m-1
};

// Solve (-tan(theta))^m = -g2/g1 and evaluate the rotated couplings.
// Odd m (or g2 = 0) admits a real angle; even m with g2 > 0 does not and
// raises analytic_domain naming both failing sign branches. For m = 1 the
// tripartite list is empty.
CanonicalCouplings canonical_couplings(double g1, double g2, int m);

// Coefficient of b1^k b2^{m-k} sigma_+ after rotating by an arbitrary theta:
// binom(m,k) [ g1 cos^k(theta) (-sin(theta))^{m-k}
//              + g2 sin^k(theta) cos^{m-k}(theta) ].
// k = m gives the b1-only coupling, k = 0 the b2-only one.
double rotated_coefficient(double g1, double g2, int m, int k, double theta);

// Two-mode rotation exp(theta (a1'a2 - a1 a2')) on the truncated two-mode
// space (labels 0..cutoff each, index l1*(cutoff+1)+l2). Real orthogonal;
// exact on kets with total occupation <= cutoff (the generator preserves
// l1+l2). Convention: conjugating a1 by it gives cos(theta) a1 - sin(theta) a2.
Eigen::MatrixXd beamsplitter_unitary(int cutoff, double theta);

// Numeric conjugation oracle: coefficients of a1^k a2^{m-k} (k = 0..m) in
// U X U^T with X = g1 a1^m + g2 a2^m and U the rotation above, projected on
// matrix columns with total occupation <= cutoff. If residual is non-null it
// receives the Frobenius norm of the unexplained remainder, which must be
// ~0: the rotated interaction is exactly a combination of those monomials.
std::vector<double> decompose_interaction(double g1, double g2, int m,
                                          double theta, int cutoff,
                                          double* residual = nullptr);

}  // namespace mpjc
