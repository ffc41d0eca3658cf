#include "mpjc/transfer.hpp"

#include <cmath>

namespace mpjc {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

double swap_amplitude(int n1, int m, double g1, double g2) {
    require(n1 >= 0 && m >= 1, "swap_amplitude: need n1 >= 0 and m >= 1");
    require(g1 >= 0.0 && g2 >= 0.0 && (g1 > 0.0 || g2 > 0.0),
            "swap_amplitude: couplings must be >= 0 and not both zero");
    const double q1 = ladder_coupling(g1, n1, m);  // |e,n1,0> -- |g,n1+m,0>
    const double q2 = ladder_coupling(g2, 0, m);   // |g,n1,m> -- |e,n1,0>
    return 2.0 * q1 * q2 / (q1 * q1 + q2 * q2);
}

double epsilon_asym(int n1, int m) {
    require(n1 >= 0 && m >= 1, "epsilon_asym: need n1 >= 0 and m >= 1");
    // sqrt(n1! m! / (n1+m)!) accumulated as a running product to avoid
    // forming large factorials: m!/( (n1+1)...(n1+m) ).
    double ratio = 1.0;
    for (int k = 1; k <= m; ++k) ratio *= static_cast<double>(k) / (n1 + k);
    return std::sqrt(ratio);
}

TransferReport transfer_plan(int n1, int m, double g2) {
    require(n1 >= 0 && m >= 1, "transfer_plan: need n1 >= 0 and m >= 1");
    require(g2 > 0.0 && std::isfinite(g2), "transfer_plan: need g2 > 0");

    TransferReport rep;
    rep.epsilon_required = epsilon_asym(n1, m);
    rep.g1 = rep.epsilon_required * g2;
    rep.g2 = g2;
    rep.A = swap_amplitude(n1, m, rep.g1, g2);

    const double q1 = ladder_coupling(rep.g1, n1, m);
    const double q2 = ladder_coupling(g2, 0, m);
    rep.t_star = M_PI / std::sqrt(q1 * q1 + q2 * q2);

    ModelParams p;
    p.n1 = n1;
    p.n2 = m;
    p.m = m;
    p.g1 = rep.g1;
    p.g2 = g2;
    p.delta = 0.0;
    p.phi = 0.0;
    const FullState state = full_state(p, rep.t_star, EnginePath::numeric);
    const BasisState target{Qubit::ground, n1 + m, 0};
    const int idx = state.spec.find_x(target);
    require(idx >= 0, "transfer_plan: target state missing from the ladder");
    rep.peak_fidelity = std::norm(state.x[idx]);
    return rep;
}

std::vector<BeamsplitterTerm> beamsplitter_output(int n1, int n2,
                                                  double theta) {
    require(n1 >= 0 && n2 >= 0, "beamsplitter_output: need n1, n2 >= 0");
    const int total = n1 + n2;
    std::vector<BeamsplitterTerm> out(total + 1);
    for (int j = 0; j <= total; ++j) out[j] = {j, total - j, complexd{0.0}};

    const double s = std::sin(theta);
    const double c = std::cos(theta);
    for (int k = 0; k <= n1; ++k) {
        for (int l = 0; l <= n2; ++l) {
            const int j = k + l;
            const double sign = (l % 2 == 0) ? 1.0 : -1.0;
            const double coeff =
                sign *
                std::sqrt(factorial(j) * factorial(total - j) *
                          factorial(n1) * factorial(n2)) /
                (factorial(n1 - k) * factorial(n2 - l) * factorial(k) *
                 factorial(l)) *
                std::pow(s, n1 - k + l) * std::pow(c, n2 + k - l);
            out[j].amp += coeff;
        }
    }
    return out;
}

double beamsplitter_prob(int n1, int n2, double theta) {
    require(n1 >= 0 && n2 >= 0, "beamsplitter_prob: need n1, n2 >= 0");
    const double binom =
        factorial(n1 + n2) / (factorial(n1) * factorial(n2));
    return binom * std::pow(std::sin(theta), 2 * n2) *
           std::pow(std::cos(theta), 2 * n1);
}

}  // namespace mpjc
