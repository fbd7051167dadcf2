#include "dplqg/bounds.hpp"

#include <cmath>
#include <string>

#include "dplqg/cost.hpp"
#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"

namespace dplqg {

namespace {

void require_diagonal(const Matrix& m, const char* name) {
    require_square(m, name);
    const double scale = std::max(m.max_abs(), 1e-300);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && std::fabs(m(i, j)) > 1e-14 * scale)
                throw DimensionError(std::string(name) +
                                     ": the bounds suite requires a diagonal matrix");
}

}  // namespace

ExtremalChannel extremal_channel(const Matrix& C, const Matrix& V) {
    require_diagonal(C, "extremal_channel: C");
    require_diagonal(V, "extremal_channel: V");
    if (C.rows() != V.rows())
        throw DimensionError("extremal_channel: C and V dimensions disagree");
    ExtremalChannel ch;
    double best_min = 0, best_max = 0;
    for (std::size_t i = 0; i < C.rows(); ++i) {
        const double c = C(i, i);
        const double v = V(i, i);
        if (!(c > 0.0))
            throw DefinitenessError("extremal_channel: C diagonal entries must be positive");
        if (!(v > 0.0))
            throw DefinitenessError("extremal_channel: V diagonal entries must be positive");
        const double ratio = c * c / v;
        if (i == 0 || ratio < best_min) {
            best_min = ratio;
            ch.index_l = i;
        }
        if (i == 0 || ratio > best_max) {
            best_max = ratio;
            ch.index_u = i;
        }
    }
    ch.C_l = C(ch.index_l, ch.index_l);
    ch.C_u = C(ch.index_u, ch.index_u);
    ch.sigma_l = std::sqrt(V(ch.index_l, ch.index_l));
    ch.sigma_u = std::sqrt(V(ch.index_u, ch.index_u));
    return ch;
}

std::pair<double, double> apriori_trace_bounds(const Matrix& A, const Matrix& W,
                                               const ExtremalChannel& ch) {
    const double trW = W.trace();
    const double trAA = (A.transpose() * A).trace();
    const double lam_n_W = sym_eig(W.symmetrized()).min();
    const double su2 = ch.sigma_u * ch.sigma_u;
    const double sl2 = ch.sigma_l * ch.sigma_l;
    const double lower = trW + su2 * trAA * lam_n_W / (su2 + lam_n_W * ch.C_u * ch.C_u);
    const double upper = trW + sl2 * trAA / (ch.C_l * ch.C_l);
    return {lower, upper};
}

std::pair<double, double> aposteriori_trace_bounds(std::size_t n, const Matrix& W,
                                                   const ExtremalChannel& ch) {
    const double lam_n_W = sym_eig(W.symmetrized()).min();
    const double su2 = ch.sigma_u * ch.sigma_u;
    const double sl2 = ch.sigma_l * ch.sigma_l;
    const double lower = n * su2 / (ch.C_u * ch.C_u + su2 / lam_n_W);
    const double upper = n * sl2 / (ch.C_l * ch.C_l);
    return {lower, upper};
}

std::pair<double, double> apriori_logdet_bounds(const Matrix& A, const Matrix& W, const Matrix& C,
                                                const Matrix& V, const ExtremalChannel& ch,
                                                LogDetForm form) {
    const std::size_t n = A.rows();
    const double trAA = (A.transpose() * A).trace();
    const double sl2 = ch.sigma_l * ch.sigma_l;
    const double upper = trAA * sl2 / (ch.C_l * ch.C_l) + W.trace();

    double channel_sum = 0.0;
    for (std::size_t i = 0; i < C.rows(); ++i) {
        const double c2 = C(i, i) * C(i, i);
        const double sigma = std::sqrt(V(i, i));
        channel_sum += form == LogDetForm::proof ? c2 / (sigma * sigma) : c2 / sigma;
    }
    const double detA = determinant(A);
    const double tr_Winv = spd_inverse(W).trace();
    const double denom = std::pow(tr_Winv + channel_sum, static_cast<double>(n)) / n;
    const double lower = std::log(detA * detA / denom + determinant(W));
    return {lower, upper};
}

std::pair<double, double> aposteriori_logdet_bounds(std::size_t n, const Matrix& W,
                                                    const ExtremalChannel& ch) {
    const double lam_n_W = sym_eig(W.symmetrized()).min();
    const double su2 = ch.sigma_u * ch.sigma_u;
    const double sl2 = ch.sigma_l * ch.sigma_l;
    const double lower = n * std::log(su2 / (ch.C_u * ch.C_u + su2 / lam_n_W));
    const double upper = n * std::log(sl2 / (ch.C_l * ch.C_l));
    return {lower, upper};
}

double error_budget_from_cost(double alpha, const NetworkModel& net,
                              const SynthesisResult& synth) {
    const Matrix H = tracking_gain_H(net.A, net.B, synth.L, synth.M);
    const double ref_penalty = reference_privacy_cost(net.Q, net.R, H, net.Wbar);
    const Matrix S = net.R + net.B.transpose() * synth.K * net.B;
    const Vector Btg = net.B.transpose() * synth.g;
    const double g_term = dot(Btg, solve_linear(S, Btg));
    const double xQx = quadratic_form(net.xtilde, net.Q, net.xtilde);
    const double lam_n_Q = sym_eig(net.Q.symmetrized()).min();
    const double budget = (alpha - xQx + g_term - ref_penalty) / lam_n_Q;
    if (!(budget > 0.0))
        throw InfeasibilityError(
            "error_budget_from_cost: cost cap " + std::to_string(alpha) +
            " is below the irreducible cost terms (budget " + std::to_string(budget) + ")");
    return budget;
}

BoundReport compute_bound_report(const NetworkModel& net, LogDetForm form) {
    BoundReport rep;
    rep.channel = extremal_channel(net.C, net.V);
    const std::size_t n = net.state_dim();
    auto [tl, tu] = apriori_trace_bounds(net.A, net.W, rep.channel);
    rep.trace_sigma = {tl, tu, std::nullopt};
    auto [bl, bu] = aposteriori_trace_bounds(n, net.W, rep.channel);
    rep.trace_sigma_bar = {bl, bu, std::nullopt};
    auto [ll, lu] = apriori_logdet_bounds(net.A, net.W, net.C, net.V, rep.channel, form);
    rep.logdet_sigma = {ll, lu, std::nullopt};
    auto [cl, cu] = aposteriori_logdet_bounds(n, net.W, rep.channel);
    rep.logdet_sigma_bar = {cl, cu, std::nullopt};

    auto [Sigma, SigmaBar] = filter_covariances(net);
    rep.trace_sigma.exact = Sigma.trace();
    rep.trace_sigma_bar.exact = SigmaBar.trace();
    rep.logdet_sigma.exact = logdet(Sigma);
    rep.logdet_sigma_bar.exact = logdet(SigmaBar);
    return rep;
}

}  // namespace dplqg
