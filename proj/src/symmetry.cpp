#include "mpjc/symmetry.hpp"

#include <cmath>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace mpjc {

namespace {

double binom(int m, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b *= static_cast<double>(m - k + i) / i;
    return b;
}

}  // namespace

double commutator_norm(const ModelParams& p, int cutoff) {
    p.validate();
    require(cutoff >= 3 * p.m + 3,
            "commutator_norm: cutoff must be >= 3m + 3 to leave an interior "
            "block free of truncation effects");
    const double gsq = p.g1 * p.g1 + p.g2 * p.g2;
    require(gsq > 0.0, "commutator_norm: g1 and g2 cannot both vanish");
    const double gt1 = p.g1 / std::sqrt(gsq);
    const double gt2 = p.g2 / std::sqrt(gsq);

    TensorSpace ts;
    ts.cutoff = cutoff;
    const int d = ts.osc_dim();
    const SparseR id_q = identity_op(2);
    const SparseR id_o = identity_op(d);
    const SparseR a = annihilation_op(cutoff);
    const SparseR adag = SparseR(a.transpose());
    const SparseR n_op = SparseR((adag * a).pruned());

    const SparseR h = build_hamiltonian_full(ts, p);
    SparseR c = gt2 * gt2 * embed3(ts, id_q, n_op, id_o);
    c += gt1 * gt1 * embed3(ts, id_q, id_o, n_op);
    c -= gt1 * gt2 * embed3(ts, id_q, adag, a);
    c -= gt1 * gt2 * embed3(ts, id_q, a, adag);

    const SparseR comm = SparseR(h * c - c * h).pruned();

    // Interior block: both oscillator labels <= cutoff - m on each side.
    const int top = cutoff - p.m;
    auto interior = [&](int idx) {
        const BasisState s = ts.unpack(idx);
        return s.n1 <= top && s.n2 <= top;
    };
    double sum = 0.0;
    for (int col = 0; col < comm.outerSize(); ++col) {
        if (!interior(col)) continue;
        for (SparseR::InnerIterator it(comm, col); it; ++it) {
            if (interior(static_cast<int>(it.row())))
                sum += it.value() * it.value();
        }
    }
    return std::sqrt(sum);
}

double rotated_coefficient(double g1, double g2, int m, int k, double theta) {
    require(m >= 1 && k >= 0 && k <= m,
            "rotated_coefficient: need m >= 1 and 0 <= k <= m");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return binom(m, k) * (g1 * std::pow(c, k) * std::pow(-s, m - k) +
                          g2 * std::pow(s, k) * std::pow(c, m - k));
}

CanonicalCouplings canonical_couplings(double g1, double g2, int m) {
    require(m >= 1, "canonical_couplings: need m >= 1");
    require(std::isfinite(g1) && std::isfinite(g2) && g1 > 0.0 && g2 >= 0.0,
            "canonical_couplings: need g1 > 0 and g2 >= 0");
    CanonicalCouplings out;
    if (g2 == 0.0) {
        out.theta = 0.0;  // nothing to cancel
    } else if (m % 2 == 1) {
        out.theta = std::atan(std::pow(g2 / g1, 1.0 / m));
    } else {
        fail(errc::analytic_domain,
             "canonical_couplings: no real rotation angle exists for even m "
             "= " + std::to_string(m) +
                 ": cancelling the second mode needs tan(theta)^m = -g2/g1 < "
                 "0, but tan(theta)^" + std::to_string(m) +
                 " is >= 0 on the +theta branch and on the -theta branch "
                 "alike");
    }
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    out.g_tilde = (g1 * g1 + sign * g2 * g2) /
                  std::pow(std::pow(g1, 2.0 / m) + std::pow(g2, 2.0 / m),
                           0.5 * m);
    out.tripartite.reserve(m - 1);
    for (int k = 1; k <= m - 1; ++k)
        out.tripartite.push_back(rotated_coefficient(g1, g2, m, k, out.theta));
    return out;
}

Eigen::MatrixXd beamsplitter_unitary(int cutoff, double theta) {
    require(cutoff >= 1, "beamsplitter_unitary: need cutoff >= 1");
    const int d = cutoff + 1;
    const Eigen::MatrixXd a =
        Eigen::MatrixXd(annihilation_op(cutoff));
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd a1 = Eigen::kroneckerProduct(a, id);
    const Eigen::MatrixXd a2 = Eigen::kroneckerProduct(id, a);
    // Generator a1'a2 - a1 a2' is real antisymmetric; its exponential is
    // orthogonal and block-diagonal over total occupation, hence exact on
    // kets with l1 + l2 <= cutoff.
    const Eigen::MatrixXd gen =
        a1.transpose() * a2 - a1 * a2.transpose();
    return (theta * gen).exp();
}

std::vector<double> decompose_interaction(double g1, double g2, int m,
                                          double theta, int cutoff,
                                          double* residual) {
    require(m >= 1, "decompose_interaction: need m >= 1");
    require(cutoff >= m + 1,
            "decompose_interaction: cutoff must exceed the exchange order");
    const int d = cutoff + 1;
    const Eigen::MatrixXd a = Eigen::MatrixXd(annihilation_op(cutoff));
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd a1 = Eigen::kroneckerProduct(a, id);
    const Eigen::MatrixXd a2 = Eigen::kroneckerProduct(id, a);

    // Powers a1^k a2^{m-k}, k = 0..m.
    std::vector<Eigen::MatrixXd> basis_ops(m + 1);
    for (int k = 0; k <= m; ++k) {
        Eigen::MatrixXd op = Eigen::MatrixXd::Identity(d * d, d * d);
        for (int i = 0; i < k; ++i) op = a1 * op;
        for (int i = 0; i < m - k; ++i) op = a2 * op;
        basis_ops[k] = std::move(op);
    }

    const Eigen::MatrixXd u = beamsplitter_unitary(cutoff, theta);
    const Eigen::MatrixXd x = g1 * basis_ops[m] + g2 * basis_ops[0];
    const Eigen::MatrixXd y = u * x * u.transpose();

    // Columns (kets) with total occupation <= cutoff are rotation-exact.
    std::vector<int> cols;
    for (int l1 = 0; l1 <= cutoff; ++l1)
        for (int l2 = 0; l2 + l1 <= cutoff; ++l2) cols.push_back(l1 * d + l2);

    // The monomials place their column-j entries in distinct rows, so the
    // masked Gram matrix is diagonal and each coefficient projects
    // independently.
    std::vector<double> coeffs(m + 1, 0.0);
    for (int k = 0; k <= m; ++k) {
        double num = 0.0, den = 0.0;
        for (int j : cols) {
            num += basis_ops[k].col(j).dot(y.col(j));
            den += basis_ops[k].col(j).squaredNorm();
        }
        require(den > 0.0, "decompose_interaction: degenerate projection");
        coeffs[k] = num / den;
    }
    if (residual != nullptr) {
        double sum = 0.0;
        for (int j : cols) {
            Eigen::VectorXd r = y.col(j);
            for (int k = 0; k <= m; ++k) r -= coeffs[k] * basis_ops[k].col(j);
            sum += r.squaredNorm();
        }
        *residual = std::sqrt(sum);
    }
    return coeffs;
}

}  // namespace mpjc
