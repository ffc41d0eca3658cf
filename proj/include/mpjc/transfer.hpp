#pragma once

#include <vector>

#include "mpjc/dynamics.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Excitation-transfer analytics
// ------------------------------------------------------------------
//
// The transfer scenario starts from |g, n1, m> (qubit ground, oscillator 2
// holding exactly one m-photon packet). Its x-branch is the three-state
// chain |g,n1,m> -- |e,n1,0> -- |g,n1+m,0>, so the population of the target
// |g, n1+m, 0> oscillates with a single frequency and a peak amplitude A
// fixed by the ratio of the two chain couplings.

struct TransferReport {
    double A = 0.0;                 // peak |amplitude| of the target state
    double t_star = 0.0;            // time of the first |amplitude|^2 maximum
    double peak_fidelity = 0.0;     // dynamics-evaluated fidelity at t_star
    double epsilon_required = 0.0;  // g1/g2 ratio that makes A = 1
    double g1 = 0.0;                // couplings the plan evaluates at
    double g2 = 0.0;
};

// Peak amplitude of |g, n1+m, 0> in the transfer chain:
// A = 2 q1 q2 / (q1^2 + q2^2) with q1 = g1 sqrt((n1+m)!/n1!), q2 = g2 sqrt(m!).
double swap_amplitude(int n1, int m, double g1, double g2);

// Coupling skew epsilon = sqrt(n1! m! / (n1+m)!): setting g1 = epsilon * g2
// equalizes the two chain couplings and gives A = 1 for any n1.
double epsilon_asym(int n1, int m);

// Full plan for a perfect |n1, m> -> |n1+m, 0> transfer at coupling g2:
// chooses g1 = epsilon * g2, predicts t_star = pi / sqrt(q1^2 + q2^2), and
// evaluates the achieved fidelity with the dynamics engine at t_star.
TransferReport transfer_plan(int n1, int m, double g2);

// ------------------------------------------------------------------
// Beamsplitter comparison oracle
// ------------------------------------------------------------------
//
// Passive two-mode rotation b1 = cos(theta) a1 - sin(theta) a2,
// b2 = sin(theta) a1 + cos(theta) a2 applied to the Fock input |n1, n2>.
// Serves as the linear-optics reference the transfer chain is compared
// against: a beamsplitter cannot concentrate all photons in one mode with
// unit probability unless one input is vacuum.

struct BeamsplitterTerm {
    int k1 = 0;     // output photons in mode 1
    int k2 = 0;     // output photons in mode 2 (k1 + k2 = n1 + n2)
    complexd amp;   // amplitude of |k1, k2>
};

// The n1+n2+1 distinct output kets with their summed amplitudes.
// Total probability is 1 up to rounding.
std::vector<BeamsplitterTerm> beamsplitter_output(int n1, int n2, double theta);

// Probability of the fully-concentrated output |n1+n2, 0>:
// P = ((n1+n2)! / (n1! n2!)) sin^{2 n2}(theta) cos^{2 n1}(theta).
double beamsplitter_prob(int n1, int n2, double theta);

}  // namespace mpjc
