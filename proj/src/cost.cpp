#include "dplqg/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dplqg/dare.hpp"
#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"

namespace dplqg {

namespace {

constexpr double kNonPrivateTau = 1e-12;

double offset_term(const NetworkModel& net, const SynthesisResult& synth) {
    const Matrix S = net.R + net.B.transpose() * synth.K * net.B;
    const Vector Btg = net.B.transpose() * synth.g;
    return -dot(Btg, solve_linear(S, Btg));
}

// J of the totalCost display for a given (V, Wbar); one code path serves the
// private cost and the non-private baseline.
double cost_at(const NetworkModel& net, const SynthesisResult& synth, const Matrix& V,
               const Matrix& Wbar, const Vector& ref, const Matrix& H, double* noise_term,
               double* ref_penalty) {
    const Matrix Sigma = solve_filter_dare(net.A, net.C, V, net.W);
    const Matrix SigmaBar =
        spd_inverse((net.C.transpose() * spd_inverse(V) * net.C + spd_inverse(Sigma)).symmetrized());
    const double noise = (synth.K * Sigma + (net.Q - synth.K) * SigmaBar).trace();
    const double penalty = reference_privacy_cost(net.Q, net.R, H, Wbar);
    if (noise_term) *noise_term = noise;
    if (ref_penalty) *ref_penalty = penalty;
    return noise + quadratic_form(ref, net.Q, ref) + offset_term(net, synth) + penalty;
}

void require_diagonal_c(const Matrix& C) {
    require_square(C, "cost_rate_bounds: C");
    const double scale = std::max(C.max_abs(), 1e-300);
    for (std::size_t i = 0; i < C.rows(); ++i)
        for (std::size_t j = 0; j < C.cols(); ++j)
            if (i != j && std::fabs(C(i, j)) > 1e-14 * scale)
                throw DimensionError("cost_rate_bounds: C must be diagonal");
}

}  // namespace

Matrix tracking_gain_H(const Matrix& A, const Matrix& B, const Matrix& L, const Matrix& M) {
    const std::size_t n = A.rows();
    const Matrix closed = A + B * L;
    const Matrix lhs = Matrix::identity(n) - closed.transpose();
    try {
        // H = M (I - (A+BL)')^-1  <=>  H' solves (I - (A+BL)) H' = M'.
        return solve_linear(lhs.transpose(), M.transpose()).transpose();
    } catch (const SingularityError& e) {
        throw SingularityError("tracking_gain_H: I - (A+BL)' is singular", e.condition_estimate);
    }
}

double reference_privacy_cost(const Matrix& Q, const Matrix& R, const Matrix& H,
                              const Matrix& Wbar) {
    require_symmetric(Wbar, "reference_privacy_cost: Wbar");
    return (Q * Wbar).trace() + (H.transpose() * R * H * Wbar).trace();
}

CostReport total_private_cost(const NetworkModel& net, const SynthesisResult& synth) {
    return total_private_cost(net, synth, net.xtilde);
}

CostReport total_private_cost(const NetworkModel& net, const SynthesisResult& synth,
                              const Vector& reference_override) {
    CostReport rep;
    const Matrix H = tracking_gain_H(net.A, net.B, synth.L, synth.M);
    rep.total = cost_at(net, synth, net.V, net.Wbar, reference_override, H, &rep.noise_term,
                        &rep.reference_penalty);
    const Matrix V0 = Matrix::scaled_identity(net.output_dim(), kNonPrivateTau);
    const Matrix Wbar0(net.state_dim(), net.state_dim());
    rep.nonprivate = cost_at(net, synth, V0, Wbar0, reference_override, H, nullptr, nullptr);
    rep.overhead = rep.total - rep.nonprivate;
    rep.reference_term = quadratic_form(reference_override, net.Q, reference_override);
    rep.offset_term = offset_term(net, synth);
    return rep;
}

double privacy_overhead(const NetworkModel& net, const SynthesisResult& synth) {
    auto [Sigma, SigmaBar] = filter_covariances(net);
    const Matrix H = tracking_gain_H(net.A, net.B, synth.L, synth.M);
    return (synth.K * Sigma + (net.Q - synth.K) * SigmaBar).trace() - (synth.K * net.W).trace() +
           reference_privacy_cost(net.Q, net.R, H, net.Wbar);
}

double privacy_overhead_at_epsilon(double epsilon, double delta, double sensitivity,
                                   const NetworkModel& net) {
    const double sigma = noise_scale({epsilon, delta}, sensitivity).sigma;
    NetworkModel scaled = net;
    scaled.V = Matrix::scaled_identity(net.output_dim(), sigma * sigma);
    scaled.Wbar = Matrix::scaled_identity(net.state_dim(), sigma * sigma);
    const SynthesisResult synth = synthesize(scaled);
    return privacy_overhead(scaled, synth);
}

RateBounds cost_rate_bounds(double epsilon, double delta, double sensitivity,
                            const NetworkModel& net, const SynthesisResult& synth) {
    require_diagonal_c(net.C);
    const double rho = spectral_radius_estimate(net.A);
    if (rho >= 1.0)
        throw DomainError("cost_rate_bounds: spectral radius of A is " + std::to_string(rho) +
                          "; the rate bounds require a strictly stable A");

    const std::size_t n = net.state_dim();
    const double sigma = noise_scale({epsilon, delta}, sensitivity).sigma;
    const Matrix V = Matrix::scaled_identity(n, sigma * sigma);
    const Matrix Sigma = solve_filter_dare(net.A, net.C, V, net.W);

    RateBounds rb;
    const Matrix G = spd_inverse((net.C * Sigma * net.C.transpose() + V).symmetrized());
    const Matrix CSig = net.C * Sigma;
    rb.P = net.C.transpose() * G * CSig * net.A.transpose();
    rb.U = (net.A.transpose() - rb.P) * (net.A - rb.P.transpose()) - Matrix::identity(n);
    rb.F = G * CSig * net.A.transpose();
    rb.Pbar = net.C.transpose() * G * CSig;
    rb.Fbar = G * CSig;
    rb.Ubar = (Matrix::identity(n) - rb.Pbar) * (Matrix::identity(n) - rb.Pbar.transpose());

    const Spectrum lamU = sym_eig(rb.U.symmetrized());
    const Spectrum lamUbar = sym_eig(rb.Ubar.symmetrized());
    const Spectrum lamK = sym_eig(synth.K.symmetrized());
    const Spectrum lamQK = sym_eig((net.Q - synth.K).symmetrized());
    const double c = -2.0 * sigma * (rb.F.transpose() * rb.F).trace();

    // tr(U dSigma/dsigma) = c with dSigma/dsigma PSD and U negative definite
    // (stable A): dividing lam_n(U) tr <= c <= lam_1(U) tr by the negative
    // eigenvalues flips both inequalities, so
    //   tr(dSigma/dsigma) in [c/lam_n(U), c/lam_1(U)].
    const double tS_lo = lamU.min() < 0.0 ? std::max(c / lamU.min(), 0.0) : 0.0;
    const double tS_up = lamU.max() < 0.0 ? c / lamU.max()
                                          : std::numeric_limits<double>::infinity();

    const double fbar_term = 2.0 * sigma * (rb.Fbar.transpose() * rb.Fbar).trace();
    const double tSb_lo = tS_lo * lamUbar.min() + fbar_term;  // Ubar is PSD
    const double tSb_up = tS_up * lamUbar.max() + fbar_term;

    // tr(K dSigma) in [lam_n(K) tS, lam_1(K) tS]; tr((Q-K) dSigmaBar) handled
    // over all sign cases of lam(Q-K) by extremizing the four products.
    const double kin = std::min({lamK.min() * tS_lo, lamK.min() * tS_up, lamK.max() * tS_lo,
                                 lamK.max() * tS_up});
    const double kax = std::max({lamK.min() * tS_lo, lamK.min() * tS_up, lamK.max() * tS_lo,
                                 lamK.max() * tS_up});
    const double qin = std::min({lamQK.min() * tSb_lo, lamQK.min() * tSb_up, lamQK.max() * tSb_lo,
                                 lamQK.max() * tSb_up});
    const double qax = std::max({lamQK.min() * tSb_lo, lamQK.min() * tSb_up, lamQK.max() * tSb_lo,
                                 lamQK.max() * tSb_up});

    const Matrix H = tracking_gain_H(net.A, net.B, synth.L, synth.M);
    const double direct =
        2.0 * sigma * net.Q.trace() + 2.0 * sigma * (H.transpose() * net.R * H).trace();

    const double dJ_dsigma_lo = kin + qin + direct;
    const double dJ_dsigma_up = kax + qax + direct;

    rb.dsigma_deps = noise_scale_derivative({epsilon, delta}, sensitivity);
    // dsigma/deps < 0 flips the interval.
    rb.lower = rb.dsigma_deps * dJ_dsigma_up;
    rb.upper = rb.dsigma_deps * dJ_dsigma_lo;
    return rb;
}

double five_point_stencil(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

double cost_rate_numeric(double epsilon, double delta, double sensitivity,
                         const NetworkModel& net, double h) {
    if (h <= 0.0) h = 1e-3 * epsilon;
    if (!(epsilon - 2.0 * h > 0.0))
        throw DomainError("cost_rate_numeric: epsilon too small for the five-point stencil");
    return five_point_stencil(
        [&](double e) { return privacy_overhead_at_epsilon(e, delta, sensitivity, net); }, epsilon,
        h);
}

}  // namespace dplqg
