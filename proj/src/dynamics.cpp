#include "mpjc/dynamics.hpp"

#include <cmath>
#include <initializer_list>
#include <memory>

namespace mpjc {

namespace {

constexpr complexd I{0.0, 1.0};

// sin(w t)/w with the w -> 0 limit.
double sinc_ratio(double w, double t) {
    if (std::abs(w) < 1e-150) return t;
    return std::sin(w * t) / w;
}

}  // namespace

// ------------------------------------------------------------------
// Spectral propagator
// ------------------------------------------------------------------

Propagator::Propagator(const Eigen::MatrixXd& m) {
    require(m.rows() == m.cols(), "Propagator: matrix must be square");
    require(m.isApprox(m.transpose(), 1e-12),
            "Propagator: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        fail(errc::eigensolver_failure,
             "Propagator: symmetric eigendecomposition did not converge");
    evals_ = solver.eigenvalues();
    evecs_ = solver.eigenvectors();
}

CoefficientVector Propagator::at(const CoefficientVector& c0, double t) const {
    require(c0.size() == evals_.size(), "Propagator: state dimension mismatch");
    const Eigen::VectorXd ar = evecs_.transpose() * c0.real();
    const Eigen::VectorXd ai = evecs_.transpose() * c0.imag();
    const int n = dim();
    Eigen::VectorXd br(n), bi(n);
    for (int k = 0; k < n; ++k) {
        const double c = std::cos(evals_[k] * t);
        const double s = -std::sin(evals_[k] * t);  // exp(-i lambda t)
        br[k] = ar[k] * c - ai[k] * s;
        bi[k] = ar[k] * s + ai[k] * c;
    }
    CoefficientVector out(n);
    out.real() = evecs_ * br;
    out.imag() = evecs_ * bi;
    return out;
}

CoefficientVector Propagator::from_seed(double amp, double t) const {
    CoefficientVector c0 = CoefficientVector::Zero(dim());
    c0[0] = amp;
    return at(c0, t);
}

CoefficientVector evolve_numeric(const Eigen::MatrixXd& m,
                                 const CoefficientVector& c0, double t) {
    Propagator prop(m);
    CoefficientVector c = prop.at(c0, t);
    const double drift = std::abs(c.norm() - c0.norm());
    if (drift > 1e-10 * std::max(1.0, c0.norm()))
        fail(errc::hermiticity_violation,
             "evolve_numeric: norm drifted by " + std::to_string(drift));
    return c;
}

// ------------------------------------------------------------------
// Closed forms
// ------------------------------------------------------------------

namespace {

void require_case(const ModelParams& p, std::initializer_list<CaseId> allowed,
                  const char* who) {
    const CaseId c = classify_case(p.n1, p.n2, p.m);
    for (CaseId a : allowed)
        if (c == a) return;
    fail(errc::case_mismatch, std::string(who) + ": parameters fall in " +
                                  to_string(c) +
                                  ", which this closed form does not cover");
}

void require_resonant(const ModelParams& p, const char* who) {
    if (p.delta != 0.0)
        fail(errc::analytic_domain,
             std::string(who) +
                 ": closed form requires a resonant qubit (delta = 0)");
}

// Frequency splitting s = sqrt(G2^2 - 4 G4). A tiny negative discriminant is
// rounded to zero; a genuine one (or a vanishing splitting) has no
// two-frequency closed form and raises analytic_domain.
double frequency_splitting(double g2sum, double g4, const char* who) {
    const double disc = g2sum * g2sum - 4.0 * g4;
    const double scale = std::max(g2sum * g2sum, 1e-300);
    if (disc < -1e-12 * scale)
        fail(errc::analytic_domain,
             std::string(who) + ": negative frequency discriminant");
    const double s = std::sqrt(std::max(disc, 0.0));
    if (s <= 1e-12 * std::sqrt(scale))
        fail(errc::analytic_domain,
             std::string(who) + ": degenerate frequency pair (s ~ 0)");
    return s;
}

// Closed solution of the resonant 5-site chain
//
//   dead -q2- center -q1- arm1 -q3- mid -q4- far
//
// seeded at `center` with amplitude `amp`. Returns (center, arm1, dead,
// mid, far). Used by both case-2 orientations.
struct ChainSolution {
    complexd center, arm1, dead, mid, far;
};

ChainSolution solve_chain5(double q1, double q2, double q3, double q4,
                           double amp, double t, const char* who) {
    const double g2sum = q1 * q1 + q2 * q2 + q3 * q3 + q4 * q4;
    const double g4 = q1 * q1 * q4 * q4 + q2 * q2 * q3 * q3 +
                      q2 * q2 * q4 * q4;
    const double s = frequency_splitting(g2sum, g4, who);
    const double mu_p = 0.5 * (g2sum + s);
    const double mu_m = 0.5 * (g2sum - s);
    const double w_p = std::sqrt(mu_p);
    const double w_m = std::sqrt(std::max(mu_m, 0.0));
    const double cos_p = std::cos(w_p * t);
    const double cos_m = std::cos(w_m * t);

    // Even (cos) pair: center and mid.
    const double gprime2 = q1 * q1 + q2 * q2 - q3 * q3 - q4 * q4;
    const double gs_p = 0.5 * (gprime2 + s);
    const double gs_m = 0.5 * (gprime2 - s);
    ChainSolution sol;
    sol.center = (amp / s) * (gs_p * cos_p - gs_m * cos_m);
    sol.mid = (amp / s) * q1 * q3 * (cos_p - cos_m);

    // Odd (sin) triple (arm1, dead, far): o'' = -C o, o(0) = 0,
    // o'(0) = -i amp u, solved with the spectral projectors of C.
    const double u[3] = {q1, q2, 0.0};
    const double C[3][3] = {
        {q1 * q1 + q3 * q3, q1 * q2, q3 * q4},
        {q1 * q2, q2 * q2, 0.0},
        {q3 * q4, 0.0, q4 * q4},
    };
    double w[3];
    for (int i = 0; i < 3; ++i)
        w[i] = C[i][0] * u[0] + C[i][1] * u[1] + C[i][2] * u[2];

    const double sp = sinc_ratio(w_p, t);
    const double sm = sinc_ratio(w_m, t);
    complexd odd[3];
    for (int i = 0; i < 3; ++i)
        odd[i] = -I * (amp / s) *
                 ((w[i] - mu_m * u[i]) * sp - (w[i] - mu_p * u[i]) * sm);
    sol.arm1 = odd[0];
    sol.dead = odd[1];
    sol.far = odd[2];
    return sol;
}

}  // namespace

CoefficientVector analytic_case1_x(const ModelParams& p, double t) {
    p.validate();
    require_case(p, {CaseId::case1}, "analytic_case1_x");
    CoefficientVector x(1);
    // The lone qubit-ground state carries diagonal energy -Delta/2, so the
    // amplitude just rotates: x1(t) = cos(phi) exp(+i Delta t / 2).
    x[0] = std::cos(p.phi) * std::exp(I * (0.5 * p.delta * t));
    return x;
}

CoefficientVector analytic_case1_y(const ModelParams& p, double t) {
    p.validate();
    require_case(p, {CaseId::case1}, "analytic_case1_y");
    const double dp = 0.5 * p.delta;
    const double ga = ladder_coupling(p.g1, p.n1, p.m);
    const double gb = ladder_coupling(p.g2, p.n2, p.m);
    const double om = std::sqrt(ga * ga + gb * gb + dp * dp);
    const double amp = std::sin(p.phi);
    const double c = std::cos(om * t);
    const double s = sinc_ratio(om, t);
    CoefficientVector y(3);
    y[0] = amp * (c - I * dp * s);
    y[1] = -I * amp * ga * s;
    y[2] = -I * amp * gb * s;
    return y;
}

CoefficientVector analytic_case2_x(const ModelParams& p, double t) {
    p.validate();
    require_case(p, {CaseId::case2a, CaseId::case2b}, "analytic_case2_x");
    // Chain x1 -gc- x2 -ga- x3; gc lowers the oscillator sitting exactly at
    // m, ga raises the spectator oscillator from its initial value.
    double ga, gc;
    if (classify_case(p.n1, p.n2, p.m) == CaseId::case2a) {
        gc = ladder_coupling(p.g2, 0, p.m);      // |g,n1,m> <-> |e,n1,0>
        ga = ladder_coupling(p.g1, p.n1, p.m);   // |e,n1,0> <-> |g,n1+m,0>
    } else {
        gc = ladder_coupling(p.g1, 0, p.m);      // |g,m,n2> <-> |e,0,n2>
        ga = ladder_coupling(p.g2, p.n2, p.m);   // |e,0,n2> <-> |g,0,n2+m>
    }
    const double dp = 0.5 * p.delta;
    const double G2 = ga * ga + gc * gc;
    const double om = std::sqrt(G2 + dp * dp);
    const double amp = std::cos(p.phi);
    const complexd bright = std::cos(om * t) + I * dp * sinc_ratio(om, t);
    const complexd dark = std::exp(I * dp * t);
    CoefficientVector x(3);
    if (G2 <= 0.0) {  // both couplings zero: state is frozen
        x[0] = amp * dark;
        x[1] = x[2] = 0.0;
        return x;
    }
    x[0] = amp * (gc * gc * bright + ga * ga * dark) / G2;
    x[1] = -I * amp * gc * sinc_ratio(om, t);
    x[2] = amp * ga * gc * (bright - dark) / G2;
    return x;
}

CoefficientVector analytic_case2_y(const ModelParams& p, double t) {
    p.validate();
    require_case(p, {CaseId::case2a, CaseId::case2b}, "analytic_case2_y");
    require_resonant(p, "analytic_case2_y");
    const double amp = std::sin(p.phi);
    CoefficientVector y(5);
    if (classify_case(p.n1, p.n2, p.m) == CaseId::case2a) {
        // y3 -q2- y1 -q1- y2 -q3- y4 -q4- y5
        const double q1 = ladder_coupling(p.g1, p.n1, p.m);
        const double q2 = ladder_coupling(p.g2, p.m, p.m);
        const double q3 = ladder_coupling(p.g2, 0, p.m);
        const double q4 = ladder_coupling(p.g1, p.n1 + p.m, p.m);
        const ChainSolution sol =
            solve_chain5(q1, q2, q3, q4, amp, t, "analytic_case2_y");
        y[0] = sol.center;
        y[1] = sol.arm1;
        y[2] = sol.dead;
        y[3] = sol.mid;
        y[4] = sol.far;
    } else {
        // y2 -q2- y1 -q1- y3 -q3- y4 -q4- y5 (mirror orientation)
        const double q1 = ladder_coupling(p.g2, p.n2, p.m);
        const double q2 = ladder_coupling(p.g1, p.m, p.m);
        const double q3 = ladder_coupling(p.g1, 0, p.m);
        const double q4 = ladder_coupling(p.g2, p.n2 + p.m, p.m);
        const ChainSolution sol =
            solve_chain5(q1, q2, q3, q4, amp, t, "analytic_case2_y");
        y[0] = sol.center;
        y[1] = sol.dead;
        y[2] = sol.arm1;
        y[3] = sol.mid;
        y[4] = sol.far;
    }
    return y;
}

CoefficientVector analytic_case3_x(const ModelParams& p, double t) {
    p.validate();
    require_case(p, {CaseId::case3}, "analytic_case3_x");
    require_resonant(p, "analytic_case3_x");
    const char* who = "analytic_case3_x";

    const double q1 = ladder_coupling(p.g1, 0, p.m);        // x1 <-> x2
    const double q2 = ladder_coupling(p.g2, 0, p.m);        // x1 <-> x3
    const double q3 = ladder_coupling(p.g1, p.m, p.m);      // x3 <-> x5
    const double q4 = ladder_coupling(p.g2, p.m, p.m);      // x2 <-> x4

    const double g2sum = q1 * q1 + q2 * q2 + q3 * q3 + q4 * q4;
    const double g4 = q1 * q1 * q3 * q3 + q2 * q2 * q4 * q4 +
                      q3 * q3 * q4 * q4;
    const double s = frequency_splitting(g2sum, g4, who);
    const double mu_p = 0.5 * (g2sum + s);
    const double mu_m = 0.5 * (g2sum - s);
    const double w_p = std::sqrt(mu_p);
    const double w_m = std::sqrt(std::max(mu_m, 0.0));
    const double f0 = s * mu_p * mu_m;
    if (!(f0 > 1e-12 * std::max(1.0, g2sum * g2sum * std::sqrt(g2sum))))
        fail(errc::analytic_domain,
             std::string(who) + ": vanishing normal-mode product (f0 ~ 0)");

    const double gprime2 = q1 * q1 - q2 * q2 - q3 * q3 + q4 * q4;
    const double gs_p = 0.5 * (gprime2 + s);
    const double gs_m = 0.5 * (gprime2 - s);

    const double q1s = q1 * q1, q2s = q2 * q2, q3s = q3 * q3, q4s = q4 * q4;
    const double f1_p = q1s * q3s * q3s + q2s * q4s * q4s -
                        (q1s * q3s + q2s * q4s) * mu_p;
    const double f1_m = q1s * q3s * q3s + q2s * q4s * q4s -
                        (q1s * q3s + q2s * q4s) * mu_m;
    const double f2_p = q1 * (q2s * q4s + q3s * gs_p) * w_p;
    const double f2_m = q1 * (q2s * q4s + q3s * gs_m) * w_m;
    const double f3_p = q2 * (q1s * q3s - q4s * gs_m) * w_p;
    const double f3_m = q2 * (q1s * q3s - q4s * gs_p) * w_m;
    const double f4_p = q1 * q4 * (q2s * q4s + q3s * gs_p);
    const double f4_m = q1 * q4 * (q2s * q4s + q3s * gs_m);
    const double f5_p = q2 * q3 * (q1s * q3s - q4s * gs_m);
    const double f5_m = q2 * q3 * (q1s * q3s - q4s * gs_p);

    const double cos_p = std::cos(w_p * t);
    const double cos_m = std::cos(w_m * t);
    const double sin_p = std::sin(w_p * t);
    const double sin_m = std::sin(w_m * t);
    const double amp = std::cos(p.phi);

    CoefficientVector x(5);
    x[0] = (amp / f0) * (f1_m * cos_m - f1_p * cos_p + s * q3s * q4s);
    x[1] = -I * (amp / f0) * (f2_p * sin_p - f2_m * sin_m);
    x[2] = -I * (amp / f0) * (f3_p * sin_p - f3_m * sin_m);
    x[3] = (amp / f0) * (f4_p * cos_p - f4_m * cos_m - s * q1 * q3s * q4);
    x[4] = (amp / f0) * (f5_p * cos_p - f5_m * cos_m - s * q2 * q3 * q4s);
    return x;
}

// ------------------------------------------------------------------
// Full-state assembly
// ------------------------------------------------------------------

EnginePath engine_path_from_string(const std::string& name) {
    if (name == "numeric") return EnginePath::numeric;
    if (name == "analytic") return EnginePath::analytic;
    if (name == "auto" || name == "automatic") return EnginePath::automatic;
    fail(errc::config_error, "unknown engine path '" + name +
                                 "' (expected numeric, analytic, or auto)");
}

const char* to_string(EnginePath path) noexcept {
    switch (path) {
        case EnginePath::numeric: return "numeric";
        case EnginePath::analytic: return "analytic";
        case EnginePath::automatic: return "auto";
    }
    return "unknown";
}

namespace {

using BranchFn = CoefficientVector (*)(const ModelParams&, double);

// Closed-form availability per branch for the given parameters.
BranchFn analytic_x_fn(const ModelParams& p, CaseId c) {
    switch (c) {
        case CaseId::case1: return &analytic_case1_x;
        case CaseId::case2a:
        case CaseId::case2b: return &analytic_case2_x;
        case CaseId::case3: return (p.delta == 0.0) ? &analytic_case3_x : nullptr;
        case CaseId::case4: return nullptr;
    }
    return nullptr;
}

BranchFn analytic_y_fn(const ModelParams& p, CaseId c) {
    switch (c) {
        case CaseId::case1: return &analytic_case1_y;
        case CaseId::case2a:
        case CaseId::case2b:
            return (p.delta == 0.0) ? &analytic_case2_y : nullptr;
        case CaseId::case3:
        case CaseId::case4: return nullptr;
    }
    return nullptr;
}

}  // namespace

std::vector<FullState> full_states(const ModelParams& p,
                                   const std::vector<double>& times,
                                   EnginePath engine) {
    p.validate();
    const CouplingMatrices mats = build_matrices(p);
    const CaseId c = mats.spec.case_id;

    BranchFn fx = analytic_x_fn(p, c);
    BranchFn fy = analytic_y_fn(p, c);
    if (engine == EnginePath::analytic) {
        if (!fx)
            fail(errc::analytic_domain,
                 std::string("full_state: no closed form for the x branch of ") +
                     to_string(c) + (p.delta != 0.0 ? " at nonzero detuning" : ""));
        if (!fy)
            fail(errc::analytic_domain,
                 std::string("full_state: no closed form for the y branch of ") +
                     to_string(c) + (p.delta != 0.0 ? " at nonzero detuning" : ""));
    } else if (engine == EnginePath::numeric) {
        fx = fy = nullptr;
    }

    // Spectral propagators only for branches that need them.
    std::unique_ptr<Propagator> px, py;
    if (!fx) px = std::make_unique<Propagator>(mats.x);
    if (!fy) py = std::make_unique<Propagator>(mats.y);

    const double cphi = std::cos(p.phi);
    const double sphi = std::sin(p.phi);

    std::vector<FullState> out;
    out.reserve(times.size());
    for (double t : times) {
        FullState st;
        st.spec = mats.spec;
        st.t = t;
        st.x = fx ? fx(p, t) : px->from_seed(cphi, t);
        st.y = fy ? fy(p, t) : py->from_seed(sphi, t);
        st.x_path = fx ? "analytic" : "numeric";
        st.y_path = fy ? "analytic" : "numeric";
        const double drift = std::abs(st.norm_sq() - 1.0);
        if (drift > 1e-9)
            fail(errc::hermiticity_violation,
                 "full_state: state norm drifted by " + std::to_string(drift));
        out.push_back(std::move(st));
    }
    return out;
}

FullState full_state(const ModelParams& p, double t, EnginePath engine) {
    return full_states(p, {t}, engine).front();
}

}  // namespace mpjc
