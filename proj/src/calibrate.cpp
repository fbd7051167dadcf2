#include "dplqg/calibrate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dplqg/cost.hpp"
#include "dplqg/dare.hpp"
#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"

namespace dplqg {

namespace {

constexpr double kDeltaLo = 1e-5, kDeltaHi = 0.1;

void require_guideline_delta(double delta, const char* where) {
    if (!(delta >= kDeltaLo && delta <= kDeltaHi))
        throw DomainError(std::string(where) + ": the guidelines require delta in [1e-5, 0.1], got " +
                          std::to_string(delta));
}

// (1/8)((1+sqrt(36 eta + 1))/eta)^2 -- the guideline lower endpoint.
double lower_endpoint(double eta) {
    const double r = (1.0 + std::sqrt(36.0 * eta + 1.0)) / eta;
    return r * r / 8.0;
}

EpsilonRange finish(EpsilonRange r) {
    if (r.lower <= r.upper) {
        r.status = EpsilonRange::Status::feasible;
    } else {
        r.status = EpsilonRange::Status::infeasible;
        r.diagnostic = "empty interval: the sufficient lower endpoint " + std::to_string(r.lower) +
                       " exceeds the upper endpoint " + std::to_string(r.upper);
    }
    return r;
}

}  // namespace

EpsilonRange epsilon_range_apriori(const CalibrationTarget& target, const Matrix& A,
                                   const Matrix& W, const ExtremalChannel& ch) {
    require_guideline_delta(target.delta, "epsilon_range_apriori");
    if (!(target.lower < target.upper))
        throw DomainError("epsilon_range_apriori: band requires B_l < B_u");
    const double trW = W.trace();
    const double lam_n_W = sym_eig(W.symmetrized()).min();
    const double trAA = (A.transpose() * A).trace();
    const double D2 = target.sensitivity * target.sensitivity;

    EpsilonRange r;
    if (!(target.lower > trW)) {
        r.diagnostic = "eta1 domain: B_l must exceed tr(W) = " + std::to_string(trW);
        return r;
    }
    const double denom = trAA * lam_n_W - target.lower + trW;
    if (!(denom > 0.0)) {
        r.diagnostic = "eta1 domain: tr(A'A) lam_n(W) - B_l + tr(W) must be positive, got " +
                       std::to_string(denom);
        return r;
    }
    if (!(target.upper > trW)) {
        r.diagnostic = "eta2 domain: B_u must exceed tr(W)";
        return r;
    }
    r.eta1 = std::sqrt((target.lower - trW) * lam_n_W * ch.C_u * ch.C_u / (D2 * denom));
    r.eta2 = std::sqrt((target.upper - trW) * ch.C_l * ch.C_l / (D2 * trAA));
    r.lower = lower_endpoint(r.eta2);
    r.upper = 1.0 / r.eta1;
    return finish(r);
}

EpsilonRange epsilon_range_aposteriori(const CalibrationTarget& target, std::size_t n,
                                       const Matrix& W, const ExtremalChannel& ch) {
    require_guideline_delta(target.delta, "epsilon_range_aposteriori");
    if (!(target.lower < target.upper))
        throw DomainError("epsilon_range_aposteriori: band requires B_l < B_u");
    const double lam_n_W = sym_eig(W.symmetrized()).min();
    const double D2 = target.sensitivity * target.sensitivity;

    EpsilonRange r;
    if (!(target.lower > 0.0)) {
        r.diagnostic = "eta3 domain: B_l must be positive";
        return r;
    }
    const double denom = static_cast<double>(n) - target.lower / lam_n_W;
    if (!(denom > 0.0)) {
        r.diagnostic = "eta3 domain: n - B_l/lam_n(W) must be positive, got " +
                       std::to_string(denom);
        return r;
    }
    r.eta3 = std::sqrt(target.lower * ch.C_u * ch.C_u / (D2 * denom));
    r.eta4 = std::sqrt(target.upper * ch.C_l * ch.C_l / (static_cast<double>(n) * D2));
    r.lower = lower_endpoint(r.eta4);
    r.upper = 1.0 / r.eta3;
    return finish(r);
}

namespace {

EpsilonRange intersect_over_agents(const CalibrationTarget& target, const NetworkModel& net,
                                   const std::vector<double>& sensitivities, bool strict_paper,
                                   const char* where,
                                   EpsilonRange (*one)(const CalibrationTarget&,
                                                       const NetworkModel&,
                                                       const ExtremalChannel&)) {
    if (sensitivities.size() != net.num_agents())
        throw DimensionError(std::string(where) + ": one sensitivity per agent required");
    if (strict_paper) {
        for (double s : sensitivities)
            if (s != sensitivities.front())
                throw DomainError(std::string(where) +
                                  ": strict mode requires a homogeneous network "
                                  "(identical sensitivities)");
    }
    const ExtremalChannel ch = extremal_channel(net.C, net.V);
    EpsilonRange out;
    out.lower = 0.0;
    out.upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sensitivities.size(); ++i) {
        CalibrationTarget t = target;
        t.sensitivity = sensitivities[i];
        const EpsilonRange r = one(t, net, ch);
        if (!r.feasible()) return r;
        out.lower = std::max(out.lower, r.lower);
        out.upper = std::min(out.upper, r.upper);
        out.eta1 = r.eta1;
        out.eta2 = r.eta2;
        out.eta3 = r.eta3;
        out.eta4 = r.eta4;
    }
    return finish(out);
}

}  // namespace

EpsilonRange epsilon_range_apriori_network(const CalibrationTarget& target,
                                           const NetworkModel& net,
                                           const std::vector<double>& sensitivities,
                                           bool strict_paper) {
    return intersect_over_agents(
        target, net, sensitivities, strict_paper, "epsilon_range_apriori_network",
        [](const CalibrationTarget& t, const NetworkModel& n, const ExtremalChannel& ch) {
            return epsilon_range_apriori(t, n.A, n.W, ch);
        });
}

EpsilonRange epsilon_range_aposteriori_network(const CalibrationTarget& target,
                                               const NetworkModel& net,
                                               const std::vector<double>& sensitivities,
                                               bool strict_paper) {
    return intersect_over_agents(
        target, net, sensitivities, strict_paper, "epsilon_range_aposteriori_network",
        [](const CalibrationTarget& t, const NetworkModel& n, const ExtremalChannel& ch) {
            return epsilon_range_aposteriori(t, n.state_dim(), n.W, ch);
        });
}

EpsilonRange epsilon_for_cost(double alpha, const NetworkModel& net, const SynthesisResult& synth,
                              double delta, double sensitivity) {
    require_guideline_delta(delta, "epsilon_for_cost");
    const double lam1K = sym_eig(synth.K.symmetrized()).max();
    const double trW = net.W.trace();
    const double trAA = (net.A.transpose() * net.A).trace();
    const double xQx = quadratic_form(net.xtilde, net.Q, net.xtilde);
    const Matrix S = net.R + net.B.transpose() * synth.K * net.B;
    const Vector Btg = net.B.transpose() * synth.g;
    const double g_term = dot(Btg, solve_linear(S, Btg));
    const Matrix H = tracking_gain_H(net.A, net.B, synth.L, synth.M);
    // C_i^2: with sigma tied across channels the extreme upper trace bound
    // uses the smallest diagonal entry of C.
    double c_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.C.rows(); ++i) c_min = std::min(c_min, net.C(i, i));
    if (!(c_min > 0.0))
        throw DefinitenessError("epsilon_for_cost: C must have positive diagonal entries");

    const double numer = alpha - lam1K * trW - xQx + g_term;
    const double denom = sensitivity * sensitivity *
                         (lam1K * trAA / (c_min * c_min) + (H.transpose() * net.R * H).trace() +
                          net.Q.trace());
    if (!(numer > 0.0))
        throw InfeasibilityError(
            "epsilon_for_cost: cost cap " + std::to_string(alpha) +
            " is below the irreducible terms lam1(K) trW + xt'Q xt - g'B(R+B'KB)^-1 B'g (eta5 "
            "radicand " +
            std::to_string(numer) + ")");
    EpsilonRange r;
    r.eta5 = std::sqrt(numer / denom);
    r.lower = lower_endpoint(r.eta5);
    r.upper = std::numeric_limits<double>::infinity();
    r.status = EpsilonRange::Status::feasible;
    return r;
}

ValidationReport validate_epsilon(double epsilon, const CalibrationTarget& target,
                                  const NetworkModel& net) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw DomainError("validate_epsilon: epsilon must be positive and finite");
    ValidationReport rep;
    rep.epsilon = epsilon;
    rep.sigma = noise_scale({epsilon, target.delta}, target.sensitivity).sigma;
    if (!(rep.sigma > 0.0))
        throw DomainError("validate_epsilon: zero noise scale (sensitivity 0) cannot be validated");

    NetworkModel scaled = net;
    scaled.V = Matrix::scaled_identity(net.output_dim(), rep.sigma * rep.sigma);
    if (target.kind == CalibrationTarget::Kind::cost_cap)
        scaled.Wbar = Matrix::scaled_identity(net.state_dim(), rep.sigma * rep.sigma);

    auto [Sigma, SigmaBar] = filter_covariances(scaled);
    rep.trace_sigma = Sigma.trace();
    rep.trace_sigma_bar = SigmaBar.trace();

    switch (target.kind) {
        case CalibrationTarget::Kind::apriori_mse:
            rep.pass = rep.trace_sigma >= target.lower && rep.trace_sigma <= target.upper;
            rep.detail = "tr(Sigma) = " + std::to_string(rep.trace_sigma) + " vs [" +
                         std::to_string(target.lower) + ", " + std::to_string(target.upper) + "]";
            break;
        case CalibrationTarget::Kind::aposteriori_mse:
            rep.pass = rep.trace_sigma_bar >= target.lower && rep.trace_sigma_bar <= target.upper;
            rep.detail = "tr(SigmaBar) = " + std::to_string(rep.trace_sigma_bar) + " vs [" +
                         std::to_string(target.lower) + ", " + std::to_string(target.upper) + "]";
            break;
        case CalibrationTarget::Kind::cost_cap: {
            const SynthesisResult synth = synthesize(scaled);
            rep.total_cost = total_private_cost(scaled, synth).total;
            rep.pass = rep.total_cost <= target.upper;
            rep.detail = "J~ = " + std::to_string(rep.total_cost) + " vs cap " +
                         std::to_string(target.upper);
            break;
        }
    }
    return rep;
}

}  // namespace dplqg
