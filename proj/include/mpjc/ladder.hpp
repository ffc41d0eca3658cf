#pragma once

#include <string>
#include <vector>

#include "mpjc/errors.hpp"

namespace mpjc {

// ------------------------------------------------------------------
// Excitation ladders of the two-oscillator / one-qubit m-photon model
// ------------------------------------------------------------------
//
// The interaction moves m photons at a time between the qubit and one
// oscillator, so a product state |q, n1, n2> only ever connects to states
// whose photon numbers differ by multiples of m, with the qubit flip
// bookkeeping the parity of moves. Each initial (n1, n2) therefore spans
// two finite "ladders" of product states, conventionally labelled the
// x-branch (seeded by |g, n1, n2>) and the y-branch (seeded by |e, n1, n2>).

enum class Qubit : int { ground = 0, excited = 1 };

// One tripartite product basis state |q, n1, n2>.
struct BasisState {
    Qubit q = Qubit::ground;
    int n1 = 0;
    int n2 = 0;

    bool operator==(const BasisState& other) const {
        return q == other.q && n1 == other.n1 && n2 == other.n2;
    }
};

// Human-readable form "|g, 3, 1>" (used in error messages and CSV headers).
std::string to_string(const BasisState& s);

// Structural classification of the initial photon pair relative to m.
// The boundary cases have special small ladders with their own closed forms.
enum class CaseId {
    case1,   // n1 < m and n2 < m
    case2a,  // n1 < m and n2 == m
    case2b,  // n2 < m and n1 == m
    case3,   // n1 == m and n2 == m
    case4,   // everything else (at least one of n1, n2 > m, or mixed)
};

const char* to_string(CaseId id) noexcept;

// Ladder length index: ell(n, m) = floor(n/m) + 1, the number of distinct
// occupation values reachable downward from n in steps of m (including n).
// Throws invalid_parameter for m <= 0 or n < 0.
int ell(int n, int m);

// Classify the initial photon pair. Same preconditions as ell().
CaseId classify_case(int n1, int n2, int m);

// A fully enumerated pair of ladders for one initial condition.
struct LadderSpec {
    int n1 = 0;
    int n2 = 0;
    int m = 1;
    CaseId case_id = CaseId::case1;
    int ell1 = 1;  // ell(n1, m)
    int ell2 = 1;  // ell(n2, m)

    // Branch bases in canonical order; x_states[0] == |g, n1, n2> and
    // y_states[0] == |e, n1, n2>. Within each branch, states coupled by the
    // interaction are never more than two positions apart (the branch
    // Hamiltonians are pentadiagonal in this order).
    std::vector<BasisState> x_states;
    std::vector<BasisState> y_states;

    int x_dim() const { return static_cast<int>(x_states.size()); }
    int y_dim() const { return static_cast<int>(y_states.size()); }
    int total_dim() const { return x_dim() + y_dim(); }

    // Position of a state in the branch, or -1 if absent.
    int find_x(const BasisState& s) const;
    int find_y(const BasisState& s) const;
};

// Enumerate both branches for the given initial condition.
//
// The canonical order interleaves the four families of reachable states in
// blocks of four per step index k >= 0 (members with a negative photon label
// are skipped, preserving the order of the survivors):
//
//   x: |g, n1+km, n2-km>, |e, n1-(k+1)m, n2+km>, |e, n1+km, n2-(k+1)m>,
//      |g, n1-(k+1)m, n2+(k+1)m>
//   y: |e, n1-km, n2+km>, |g, n1+(k+1)m, n2-km>, |g, n1-km, n2+(k+1)m>,
//      |e, n1+(k+1)m, n2-(k+1)m>
//
// Branch sizes are 2*ell1 + 2*ell2 - 3 (x) and 2*ell1 + 2*ell2 - 1 (y).
// Throws invalid_parameter for m <= 0 or negative photon numbers.
LadderSpec enumerate_basis(int n1, int n2, int m);

}  // namespace mpjc
