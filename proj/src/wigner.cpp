#include "mpjc/wigner.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mpjc/hamiltonian.hpp"

namespace mpjc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGl8Nodes[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGl8Weights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};
double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

// Upper incomplete gamma for a a positive multiple of 1/2, by upward
// recurrence from erfc / exp. Used only inside the tail bound.
double upper_gamma(double a, double x) {
    const int twice = static_cast<int>(std::lround(2.0 * a));
    double aa, g;
    if (twice % 2 == 1) {
        aa = 0.5;
        g = std::sqrt(kPi) * std::erfc(std::sqrt(x));
    } else {
        aa = 1.0;
        g = std::exp(-x);
    }
    while (aa < a - 0.25) {
        g = aa * g + std::exp(aa * std::log(x) - x);
        aa += 1.0;
    }
    return g;
}

void validate_dm(const DensityMatrix& dm, const char* who) {
    require(dm.dim() > 0, std::string(who) + ": empty density matrix");
    require(dm.rho.rows() == dm.dim() && dm.rho.cols() == dm.dim(),
            std::string(who) + ": label/matrix size mismatch");
    for (int i = 0; i < dm.dim(); ++i) {
        require(dm.labels[i] >= 0,
                std::string(who) + ": negative Fock label");
        require(i == 0 || dm.labels[i] > dm.labels[i - 1],
                std::string(who) + ": labels must be strictly ascending");
    }
}

}  // namespace

double laguerre_assoc(int n, int a, double x) {
    require(n >= 0 && a >= 0, "laguerre_assoc: indices must be >= 0");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + a - x;
    for (int k = 1; k < n; ++k) {
        const double lp1 =
            ((2.0 * k + 1.0 + a - x) * l - (k + a) * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

complexd t_matrix_element(int k1, int k2, complexd alpha) {
    require(k1 >= 0 && k2 >= 0, "t_matrix_element: Fock labels must be >= 0");
    if (k1 > k2) return std::conj(t_matrix_element(k2, k1, alpha));
    const int da = k2 - k1;
    const double z = 4.0 * std::norm(alpha);
    const double f = (da == 0) ? 1.0 : 1.0 / ladder_factor(k1, da);
    const double sign = (k1 % 2 != 0) ? -1.0 : 1.0;
    const complexd pw = (da == 0) ? complexd{1.0, 0.0}
                                  : std::pow(2.0 * std::conj(alpha), da);
    return 2.0 * sign * std::exp(-0.5 * z) * f * pw * laguerre_assoc(k1, da, z);
}

// ------------------------------------------------------------------
// WignerEvaluator
// ------------------------------------------------------------------

WignerEvaluator::WignerEvaluator(DensityMatrix dm) : dm_(std::move(dm)) {
    validate_dm(dm_, "WignerEvaluator");
    const int n = dm_.dim();
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const complexd lo = dm_.rho(i, j);
            const complexd hi = dm_.rho(j, i);
            if (std::abs(lo) == 0.0 && std::abs(hi) == 0.0) continue;
            Pair p;
            p.k_min = dm_.labels[i];
            p.da = dm_.labels[j] - dm_.labels[i];
            const double f =
                (p.da == 0) ? 1.0 : 1.0 / ladder_factor(p.k_min, p.da);
            p.factor = 2.0 * ((p.k_min % 2 != 0) ? -1.0 : 1.0) * f;
            p.r_lo = lo;
            p.r_hi = hi;
            pairs_.push_back(p);
            max_da_ = std::max(max_da_, p.da);
        }
    }
    powers_.resize(static_cast<size_t>(max_da_) + 1);
}

double WignerEvaluator::operator()(complexd alpha) const {
    const double z = 4.0 * std::norm(alpha);
    const double env = std::exp(-0.5 * z);
    if (env == 0.0) return 0.0;  // beyond double range: the state lives nowhere near

    powers_[0] = complexd{1.0, 0.0};
    const complexd tw = 2.0 * alpha;
    for (int d = 1; d <= max_da_; ++d) powers_[d] = powers_[d - 1] * tw;

    complexd acc{0.0, 0.0};
    for (const Pair& p : pairs_) {
        const double lag = laguerre_assoc(p.k_min, p.da, z);
        if (p.da == 0) {
            acc += p.r_lo * (p.factor * lag);
        } else {
            const complexd pw = powers_[p.da];
            acc += (p.r_lo * pw + p.r_hi * std::conj(pw)) * (p.factor * lag);
        }
    }
    acc *= env / kPi;
    if (std::abs(acc.imag()) > 1e-10)
        fail(errc::hermiticity_violation,
             "wigner_at: non-Hermitian density matrix left an imaginary "
             "residue of " + std::to_string(acc.imag()));
    return acc.real();
}

double wigner_at(const DensityMatrix& dm, complexd alpha) {
    return WignerEvaluator(dm)(alpha);
}

// ------------------------------------------------------------------
// Tail bound
// ------------------------------------------------------------------

double wigner_tail_bound(const DensityMatrix& dm, double radius) {
    validate_dm(dm, "wigner_tail_bound");
    require(radius > 0.0, "wigner_tail_bound: radius must be positive");
    const double x = 2.0 * radius * radius;
    double bound = 0.0;
    for (int i = 0; i < dm.dim(); ++i) {
        for (int j = i; j < dm.dim(); ++j) {
            const double w = (i == j)
                                 ? std::abs(dm.rho(i, i))
                                 : std::abs(dm.rho(i, j)) + std::abs(dm.rho(j, i));
            if (w == 0.0) continue;
            const int k_min = dm.labels[i];
            const int da = dm.labels[j] - dm.labels[i];
            const double f = (da == 0) ? 1.0 : 1.0 / ladder_factor(k_min, da);
            // |L_k^a(z)| <= L_k^a(-z) termwise; each monomial integrates to
            // an upper incomplete gamma.
            double inner = 0.0;
            double inv_fact = 1.0;
            for (int t = 0; t <= k_min; ++t) {
                if (t > 0) inv_fact /= t;
                inner += binom(k_min + da, k_min - t) * inv_fact *
                         std::pow(2.0, 0.5 * da + t - 2.0) *
                         upper_gamma(0.5 * da + t + 1.0, x);
            }
            bound += w * 4.0 * f * inner;
        }
    }
    return bound;
}

// ------------------------------------------------------------------
// Negativity volume: adaptive polar quadrature
// ------------------------------------------------------------------

namespace {

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

struct Panel {
    double r0, r1, th0, th1;
    int depth = 0;
};

class NegQuad {
  public:
    NegQuad(const WignerEvaluator& w, const QuadratureOptions& opts)
        : w_(w), opts_(opts) {}

    // Integral of min(W,0) r dr dth over the panel by tensor Gauss-Legendre.
    double eval(const Panel& p, const double* nodes, const double* wts,
                int n) {
        const double hr = 0.5 * (p.r1 - p.r0), cr = 0.5 * (p.r1 + p.r0);
        const double ht = 0.5 * (p.th1 - p.th0), ct = 0.5 * (p.th1 + p.th0);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = cr + hr * nodes[i];
            for (int j = 0; j < n; ++j) {
                const double th = ct + ht * nodes[j];
                const double wv = w_(std::polar(r, th));
                if (wv < 0.0) acc += wts[i] * wts[j] * wv * r;
            }
        }
        evals_ += n * n;
        if (evals_ > opts_.max_evaluations)
            fail(errc::quadrature_failure,
                 "negativity_volume: evaluation budget exhausted (" +
                     std::to_string(evals_) + " samples)");
        return acc * hr * ht;
    }

    long evaluations() const { return evals_; }

  private:
    const WignerEvaluator& w_;
    const QuadratureOptions& opts_;
    long evals_ = 0;
};

std::array<Panel, 4> split(const Panel& p) {
    const double rm = 0.5 * (p.r0 + p.r1);
    const double tm = 0.5 * (p.th0 + p.th1);
    std::array<Panel, 4> kids;
    kids[0] = Panel{p.r0, rm, p.th0, tm, p.depth + 1};
    kids[1] = Panel{p.r0, rm, tm, p.th1, p.depth + 1};
    kids[2] = Panel{rm, p.r1, p.th0, tm, p.depth + 1};
    kids[3] = Panel{rm, p.r1, tm, p.th1, p.depth + 1};
    return kids;
}

}  // namespace

NegativityResult negativity_volume(const DensityMatrix& dm,
                                   const QuadratureOptions& opts) {
    require(opts.tol >= 1e-10 && opts.tol <= 1.0,
            "negativity_volume: tol must lie in [1e-10, 1]");
    require(opts.max_depth >= 2 && opts.theta_panels >= 1 &&
                opts.radial_panel > 0.0,
            "negativity_volume: malformed quadrature options");
    WignerEvaluator w(dm);

    // Integration radius: grow until the certified Gaussian tail is beneath
    // a tenth of the tolerance budget.
    double radius = std::sqrt(static_cast<double>(dm.max_label()) + 1.0) + 3.0;
    while (wigner_tail_bound(dm, radius) > 0.1 * opts.tol) {
        radius += 0.5;
        if (radius > 60.0)
            fail(errc::quadrature_failure,
                 "negativity_volume: tail bound does not close below the "
                 "tolerance");
    }
    const double tail = wigner_tail_bound(dm, radius);

    NegQuad quad(w, opts);
    const double interior_budget = 0.5 * opts.tol;

    // One refinement candidate: a panel, its own GL8 value, and the sum over
    // its four children's GL8 values; the mismatch is its error estimate.
    struct Leaf {
        Panel p;
        double child_sum = 0.0;
        double diff = 0.0;
        std::array<double, 4> kid_vals{};
        long seq = 0;  // insertion order: the deterministic tie-breaker
    };
    std::vector<Leaf> leaves;      // refinable set, kept as a max-heap
    std::vector<Leaf> frozen;      // at max_depth: kept, never refined
    long next_seq = 0;
    double pending = 0.0;          // running sum of every leaf's diff

    auto heap_before = [](const Leaf& a, const Leaf& b) {
        if (a.diff != b.diff) return a.diff < b.diff;  // max-heap on diff
        return a.seq > b.seq;                          // FIFO among ties
    };
    // Evaluate a panel's children and classify it as refinable or frozen.
    auto add_leaf = [&](const Panel& p, double own_integral) {
        Leaf leaf;
        leaf.p = p;
        leaf.seq = next_seq++;
        double child_sum = 0.0;
        const std::array<Panel, 4> kids = split(p);
        for (int k = 0; k < 4; ++k) {
            leaf.kid_vals[k] = quad.eval(kids[k], kGl8Nodes, kGl8Weights, 8);
            child_sum += leaf.kid_vals[k];
        }
        leaf.child_sum = child_sum;
        leaf.diff = std::abs(own_integral - child_sum);
        pending += leaf.diff;
        if (p.depth >= opts.max_depth) {
            frozen.push_back(std::move(leaf));
        } else {
            leaves.push_back(std::move(leaf));
            std::push_heap(leaves.begin(), leaves.end(), heap_before);
        }
    };

    const int n_r = std::max(
        4, static_cast<int>(std::ceil(radius / opts.radial_panel)));
    const int n_t = std::max(opts.theta_panels, 4);
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_t; ++j) {
            Panel p;
            p.r0 = radius * i / n_r;
            p.r1 = radius * (i + 1) / n_r;
            p.th0 = 2.0 * kPi * j / n_t;
            p.th1 = 2.0 * kPi * (j + 1) / n_t;
            add_leaf(p, quad.eval(p, kGl8Nodes, kGl8Weights, 8));
        }
    }

    // Greedy refinement: always split the leaf with the worst mismatch, so
    // the evaluation budget concentrates on the W = 0 crossing curves.
    while (pending > interior_budget && !leaves.empty() &&
           leaves.front().diff > 0.0) {
        std::pop_heap(leaves.begin(), leaves.end(), heap_before);
        const Leaf worst = std::move(leaves.back());
        leaves.pop_back();
        pending -= worst.diff;
        const std::array<Panel, 4> kids = split(worst.p);
        for (int k = 0; k < 4; ++k) add_leaf(kids[k], worst.kid_vals[k]);
    }

    // Deterministic final accumulation in insertion order.
    std::vector<const Leaf*> all;
    all.reserve(leaves.size() + frozen.size());
    for (const Leaf& l : leaves) all.push_back(&l);
    for (const Leaf& l : frozen) all.push_back(&l);
    std::sort(all.begin(), all.end(),
              [](const Leaf* a, const Leaf* b) { return a->seq < b->seq; });
    KahanSum acc, err;
    for (const Leaf* l : all) {
        acc.add(l->child_sum);
        err.add(l->diff);
    }

    NegativityResult res;
    res.volume = std::max(0.0, -acc.s);
    res.abs_error = err.s + tail;
    res.evaluations = quad.evaluations();
    res.radius = radius;
    if (res.abs_error > opts.tol)
        fail(errc::quadrature_failure,
             "negativity_volume: tolerance " + std::to_string(opts.tol) +
                 " not certified (error estimate " +
                 std::to_string(res.abs_error) + ")");
    return res;
}

NegativityResult negativity_volume(const DensityMatrix& dm, double tol) {
    QuadratureOptions opts;
    opts.tol = tol;
    return negativity_volume(dm, opts);
}

// ------------------------------------------------------------------
// Closed-form Wigner functions for the boundary cases
// ------------------------------------------------------------------

namespace {

// Tridiagonal Laguerre combination shared by every boundary case: labels
// ascend in steps of m, diag holds populations, super holds rho(l, l+m).
double tridiag_wtilde(const std::vector<int>& labels,
                      const std::vector<double>& diag,
                      const std::vector<complexd>& super, int m,
                      complexd alpha) {
    const double z = 4.0 * std::norm(alpha);
    const complexd am = std::pow(alpha, m);
    const double two_m = std::pow(2.0, m);
    double acc = 0.0;
    for (size_t j = 0; j < labels.size(); ++j) {
        const double sign = (labels[j] % 2 != 0) ? -1.0 : 1.0;
        acc += sign * diag[j] * laguerre_assoc(labels[j], 0, z);
        if (j + 1 < labels.size() && super[j] != complexd{0.0, 0.0}) {
            const double f = 1.0 / ladder_factor(labels[j], m);
            acc += sign * two_m * f * 2.0 * std::real(super[j] * am) *
                   laguerre_assoc(labels[j], m, z);
        }
    }
    return acc;
}

double sq(complexd v) { return std::norm(v); }

}  // namespace

double wigner_closed_form(const FullState& state, int which, complexd alpha) {
    require(which == 1 || which == 2,
            "wigner_closed_form: oscillator index must be 1 or 2");
    const LadderSpec& sp = state.spec;
    const CoefficientVector& x = state.x;
    const CoefficientVector& y = state.y;
    const int m = sp.m;

    std::vector<int> labels;
    std::vector<double> diag;
    std::vector<complexd> super;

    switch (sp.case_id) {
        case CaseId::case1: {
            const int base = (which == 1) ? sp.n1 : sp.n2;
            const complexd arm = (which == 1) ? y[1] : y[2];
            const complexd spectator = (which == 1) ? y[2] : y[1];
            labels = {base, base + m};
            diag = {sq(x[0]) + sq(y[0]) + sq(spectator), sq(arm)};
            super = {x[0] * std::conj(arm)};
            break;
        }
        case CaseId::case2a: {
            if (which == 1) {
                labels = {sp.n1, sp.n1 + m, sp.n1 + 2 * m};
                diag = {sq(x[0]) + sq(x[1]) + sq(y[0]) + sq(y[2]),
                        sq(x[2]) + sq(y[1]) + sq(y[3]), sq(y[4])};
                super = {x[0] * std::conj(y[1]) + x[1] * std::conj(y[3]),
                         x[2] * std::conj(y[4])};
            } else {
                labels = {0, m, 2 * m};
                diag = {sq(x[1]) + sq(x[2]) + sq(y[3]) + sq(y[4]),
                        sq(x[0]) + sq(y[0]) + sq(y[1]), sq(y[2])};
                super = {x[1] * std::conj(y[0]) + x[2] * std::conj(y[1]),
                         x[0] * std::conj(y[2])};
            }
            break;
        }
        case CaseId::case2b: {
            if (which == 1) {
                labels = {0, m, 2 * m};
                diag = {sq(x[1]) + sq(x[2]) + sq(y[3]) + sq(y[4]),
                        sq(x[0]) + sq(y[0]) + sq(y[2]), sq(y[1])};
                super = {x[1] * std::conj(y[0]) + x[2] * std::conj(y[2]),
                         x[0] * std::conj(y[1])};
            } else {
                labels = {sp.n2, sp.n2 + m, sp.n2 + 2 * m};
                diag = {sq(x[0]) + sq(x[1]) + sq(y[0]) + sq(y[1]),
                        sq(x[2]) + sq(y[2]) + sq(y[3]), sq(y[4])};
                super = {x[0] * std::conj(y[2]) + x[1] * std::conj(y[3]),
                         x[2] * std::conj(y[4])};
            }
            break;
        }
        case CaseId::case3: {
            labels = {0, m, 2 * m, 3 * m};
            if (which == 1) {
                diag = {sq(x[1]) + sq(x[3]) + sq(y[4]) + sq(y[6]),
                        sq(x[0]) + sq(x[2]) + sq(y[0]) + sq(y[2]),
                        sq(x[4]) + sq(y[1]) + sq(y[3]), sq(y[5])};
                super = {x[1] * std::conj(y[0]) + x[3] * std::conj(y[2]),
                         x[0] * std::conj(y[1]) + x[2] * std::conj(y[3]),
                         x[4] * std::conj(y[5])};
            } else {
                diag = {sq(x[2]) + sq(x[4]) + sq(y[3]) + sq(y[5]),
                        sq(x[0]) + sq(x[1]) + sq(y[0]) + sq(y[1]),
                        sq(x[3]) + sq(y[2]) + sq(y[4]), sq(y[6])};
                super = {x[2] * std::conj(y[0]) + x[4] * std::conj(y[1]),
                         x[0] * std::conj(y[2]) + x[1] * std::conj(y[4]),
                         x[3] * std::conj(y[6])};
            }
            break;
        }
        case CaseId::case4:
            fail(errc::case_mismatch,
                 "wigner_closed_form: closed-form W covers the boundary "
                 "ladder cases only (general ladders go through wigner_at)");
    }

    const double wtilde = tridiag_wtilde(labels, diag, super, m, alpha);
    return (2.0 / kPi) * std::exp(-2.0 * std::norm(alpha)) * wtilde;
}

}  // namespace mpjc
