#include "mpjc/lindblad.hpp"

#include <algorithm>
#include <cmath>

namespace mpjc {

void LindbladConfig::validate() const {
    require(lambda_r >= 0.0 && nbar >= 0.0 && lambda_d >= 0.0,
            "LindbladConfig: rates and nbar must be >= 0");
    require(std::isfinite(lambda_r) && std::isfinite(nbar) &&
                std::isfinite(lambda_d),
            "LindbladConfig: rates must be finite");
    require(cutoff == -1 || cutoff >= 1,
            "LindbladConfig: cutoff must be -1 (auto) or >= 1");
    require(rtol >= 1e-13 && rtol <= 1e-2 && atol > 0.0,
            "LindbladConfig: rtol must lie in [1e-13, 1e-2], atol > 0");
    require(leak_tol > 0.0 && trace_tol > 0.0,
            "LindbladConfig: tolerances must be positive");
}

int LindbladConfig::resolve_cutoff(const ModelParams& p) const {
    if (cutoff != -1) return cutoff;
    return std::max(p.n1, p.n2) + 3 * p.m + 2;
}

std::vector<LindbladOp> build_lindblad_ops(const TensorSpace& ts,
                                           const LindbladConfig& cfg) {
    cfg.validate();
    const int d = ts.osc_dim();
    const SparseR id_o = identity_op(d);
    const SparseR id_q = identity_op(2);
    const SparseR a = annihilation_op(ts.cutoff);
    const SparseR adag = SparseR(a.transpose());
    const SparseR n_op = SparseR((adag * a).pruned());

    std::vector<LindbladOp> ops;
    const double down = cfg.lambda_r * (1.0 + cfg.nbar);
    const double up = cfg.lambda_r * cfg.nbar;
    if (down > 0.0) {
        ops.push_back({"a1", down, embed3(ts, id_q, a, id_o)});
        ops.push_back({"a2", down, embed3(ts, id_q, id_o, a)});
        ops.push_back({"sigma_minus", down, embed3(ts, sigma_minus_op(), id_o, id_o)});
    }
    if (up > 0.0) {
        ops.push_back({"a1_dag", up, embed3(ts, id_q, adag, id_o)});
        ops.push_back({"a2_dag", up, embed3(ts, id_q, id_o, adag)});
        ops.push_back({"sigma_plus", up, embed3(ts, sigma_plus_op(), id_o, id_o)});
    }
    if (cfg.lambda_d > 0.0) {
        ops.push_back({"n1", cfg.lambda_d, embed3(ts, id_q, n_op, id_o)});
        ops.push_back({"n2", cfg.lambda_d, embed3(ts, id_q, id_o, n_op)});
        ops.push_back({"sigma_z", cfg.lambda_d, embed3(ts, sigma_z_op(), id_o, id_o)});
    }
    return ops;
}

namespace {

constexpr complexd I{0.0, 1.0};

// Right-hand side of the master equation with the structure split out:
// diagonal collapse operators act elementwise, the rest via sparse products.
class MasterRhs {
  public:
    MasterRhs(const TensorSpace& ts, const ModelParams& p,
              const LindbladConfig& cfg)
        : h_(build_hamiltonian_full(ts, p).cast<complexd>()) {
        const int n = ts.dim();
        k_diag_ = Eigen::VectorXd::Zero(n);
        for (const LindbladOp& op : build_lindblad_ops(ts, cfg)) {
            // Accumulate K = 1/2 sum rate * A^dag A; diagonal for this
            // operator set (asserted below).
            const SparseR aa = SparseR((SparseR(op.op.transpose()) * op.op).pruned());
            for (int col = 0; col < aa.outerSize(); ++col) {
                for (SparseR::InnerIterator it(aa, col); it; ++it) {
                    if (it.row() == it.col()) {
                        k_diag_[it.row()] += 0.5 * op.rate * it.value();
                    } else if (std::abs(it.value()) > 1e-14) {
                        fail(errc::invalid_parameter,
                             "evolve_master: collapse operator '" + op.name +
                                 "' has a non-diagonal A^dag A (internal "
                                 "inconsistency)");
                    }
                }
            }
            // Diagonal jump operators contribute d d^T . rho elementwise.
            bool diagonal = true;
            for (int col = 0; col < op.op.outerSize() && diagonal; ++col)
                for (SparseR::InnerIterator it(op.op, col); it; ++it)
                    if (it.row() != it.col()) { diagonal = false; break; }
            if (diagonal) {
                DiagJump dj;
                dj.rate = op.rate;
                dj.d = Eigen::VectorXd(op.op.diagonal());
                diag_jumps_.push_back(std::move(dj));
            } else {
                SparseJump sj;
                sj.rate = op.rate;
                sj.a = op.op.cast<complexd>();
                sj.adag = SparseC(sj.a.adjoint());
                sparse_jumps_.push_back(std::move(sj));
            }
        }
    }

    void operator()(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out,
                    Eigen::MatrixXcd& tmp) const {
        out.noalias() = h_ * rho;
        out.noalias() -= rho * h_;
        out *= -I;
        const int n = static_cast<int>(rho.rows());
        for (int j = 0; j < n; ++j)
            out.col(j).array() -=
                (k_diag_.array() + k_diag_[j]) * rho.col(j).array();
        for (const DiagJump& dj : diag_jumps_)
            for (int j = 0; j < n; ++j)
                out.col(j).array() += (dj.rate * dj.d[j]) *
                                      (dj.d.array() * rho.col(j).array());
        for (const SparseJump& sj : sparse_jumps_) {
            tmp.noalias() = sj.a * rho;
            out.noalias() += sj.rate * (tmp * sj.adag);
        }
    }

  private:
    struct DiagJump {
        double rate;
        Eigen::VectorXd d;
    };
    struct SparseJump {
        double rate;
        SparseC a, adag;
    };
    SparseC h_;
    Eigen::VectorXd k_diag_;
    std::vector<DiagJump> diag_jumps_;
    std::vector<SparseJump> sparse_jumps_;
};

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

}  // namespace

MasterResult evolve_master(const ModelParams& p, const LindbladConfig& cfg,
                           const std::vector<double>& times) {
    p.validate();
    cfg.validate();
    require(!times.empty(), "evolve_master: empty time grid");
    for (size_t i = 0; i < times.size(); ++i) {
        require(times[i] >= 0.0, "evolve_master: times must be >= 0");
        require(i == 0 || times[i] > times[i - 1],
                "evolve_master: times must be strictly ascending");
    }

    MasterResult res;
    res.space.cutoff = cfg.resolve_cutoff(p);
    const TensorSpace& ts = res.space;
    require(p.n1 <= ts.cutoff && p.n2 <= ts.cutoff,
            "evolve_master: initial photon numbers exceed the cutoff");

    const int n = ts.dim();
    const MasterRhs rhs(ts, p, cfg);

    // rho(0) = |psi0><psi0|.
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(n);
    psi0[ts.index(Qubit::ground, p.n1, p.n2)] = std::cos(p.phi);
    psi0[ts.index(Qubit::excited, p.n1, p.n2)] = std::sin(p.phi);
    Eigen::MatrixXcd rho = psi0 * psi0.adjoint();

    Eigen::MatrixXcd k1(n, n), k2(n, n), k3(n, n), k4(n, n), k5(n, n),
        k6(n, n), k7(n, n), ytmp(n, n), yerr(n, n), tmp(n, n);

    auto check_and_record = [&](double t_now) {
        const double herm = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
        res.max_hermiticity_drift = std::max(res.max_hermiticity_drift, herm);
        if (herm > 1e-8)
            fail(errc::integrator_failure,
                 "evolve_master: Hermiticity drift " + std::to_string(herm) +
                     " at t = " + std::to_string(t_now));
        rho = 0.5 * (rho + rho.adjoint().eval());
        const complexd tr = rho.trace();
        const double drift =
            std::abs(tr.real() - 1.0) + std::abs(tr.imag());
        res.max_trace_drift = std::max(res.max_trace_drift, drift);
        if (drift > cfg.trace_tol)
            fail(errc::integrator_failure,
                 "evolve_master: trace drift " + std::to_string(drift) +
                     " at t = " + std::to_string(t_now));
    };

    auto record_output = [&](double t_now) {
        const double leak = edge_population(ts, rho);
        res.max_leakage = std::max(res.max_leakage, leak);
        if (leak > cfg.leak_tol) {
            if (cfg.strict)
                fail(errc::truncation_overflow,
                     "evolve_master: truncation leakage " +
                         std::to_string(leak) + " at t = " +
                         std::to_string(t_now) + " (cutoff " +
                         std::to_string(ts.cutoff) + ")");
            res.leak_warning = true;
        }
        res.times.push_back(t_now);
        res.states.push_back(rho);
    };

    double t = 0.0;
    double h = 1e-3;
    rhs(rho, k1, tmp);  // FSAL seed
    for (double t_target : times) {
        if (t_target == 0.0) {
            record_output(0.0);
            continue;
        }
        while (t < t_target) {
            h = std::min(h, t_target - t);
            if (h < 1e-12)
                fail(errc::integrator_failure,
                     "evolve_master: step size underflow at t = " +
                         std::to_string(t));

            ytmp = rho + h * (kA21 * k1);
            rhs(ytmp, k2, tmp);
            ytmp = rho + h * (kA31 * k1 + kA32 * k2);
            rhs(ytmp, k3, tmp);
            ytmp = rho + h * (kA41 * k1 + kA42 * k2 + kA43 * k3);
            rhs(ytmp, k4, tmp);
            ytmp = rho + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
            rhs(ytmp, k5, tmp);
            ytmp = rho +
                   h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 +
                        kA65 * k5);
            rhs(ytmp, k6, tmp);
            ytmp = rho +
                   h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
            rhs(ytmp, k7, tmp);
            yerr = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 +
                        kE7 * k7);

            // Scaled RMS error over all entries.
            double err_sq = 0.0;
            for (int c = 0; c < n; ++c) {
                for (int r = 0; r < n; ++r) {
                    const double scale =
                        cfg.atol + cfg.rtol * std::max(std::abs(rho(r, c)),
                                                       std::abs(ytmp(r, c)));
                    const double e = std::abs(yerr(r, c)) / scale;
                    err_sq += e * e;
                }
            }
            const double err = std::sqrt(err_sq / (static_cast<double>(n) * n));

            if (err <= 1.0) {
                t += h;
                rho.swap(ytmp);
                k1.swap(k7);  // FSAL
                ++res.steps_accepted;
                check_and_record(t);
                // The symmetrization nudges rho off the FSAL trajectory by
                // O(machine eps); k1 stays a valid stage seed at this order.
            } else {
                ++res.steps_rejected;
            }
            const double factor =
                std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            h = std::min(h * factor, 1.0);
        }
        record_output(t);
    }
    return res;
}

double fock_swap_fidelity_open(const ModelParams& p, const LindbladConfig& cfg,
                               double t) {
    require(classify_case(p.n1, p.n2, p.m) == CaseId::case2a,
            "fock_swap_fidelity_open: the swap scenario requires n2 = m and "
            "n1 < m");
    require(p.phi == 0.0,
            "fock_swap_fidelity_open: the swap scenario starts from phi = 0");
    MasterResult res = evolve_master(p, cfg, {t});
    const DensityMatrix rho1 =
        partial_trace_oscillator(res.space, res.states.back(), 1);
    return rho1.rho(p.n1 + p.m, p.n1 + p.m).real();
}

}  // namespace mpjc
