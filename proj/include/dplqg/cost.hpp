#pragma once

#include <functional>

#include "dplqg/model.hpp"
#include "dplqg/synthesis.hpp"

namespace dplqg {

/// (-f(x+2h) + 8 f(x+h) - 8 f(x-h) + f(x-2h)) / (12 h); exact through
/// fourth-degree polynomials.
double five_point_stencil(const std::function<double(double)>& f, double x, double h);

/// H = M [I - (A+BL)']^-1; maps steady reference perturbations to steady
/// input perturbations. Requires I - (A+BL)' invertible.
Matrix tracking_gain_H(const Matrix& A, const Matrix& B, const Matrix& L, const Matrix& M);

/// Expected cost increase from privatizing the reference limit:
/// tr(Q Wbar) + tr(H'RH Wbar).
double reference_privacy_cost(const Matrix& Q, const Matrix& R, const Matrix& H,
                              const Matrix& Wbar);

struct CostReport {
    double total = 0;              // J~ with privacy noise on outputs and reference
    double nonprivate = 0;         // J0: same formula at V -> 0, Wbar = 0
    double overhead = 0;           // total - nonprivate
    double noise_term = 0;         // tr(K Sigma + (Q-K) SigmaBar)
    double reference_term = 0;     // r'Qr for the reference vector used
    double offset_term = 0;        // -g'B(R+B'KB)^-1 B'g
    double reference_penalty = 0;  // tr(Q Wbar) + tr(H'RH Wbar)
};

/// Total cost of the private implementation,
///   J~ = tr(K Sigma + (Q-K) SigmaBar) + r'Qr - g'B(R+B'KB)^-1 B'g
///        + tr(Q Wbar) + tr(H'RH Wbar),
/// evaluated by default at r = xtilde (the cloud's information set); pass
/// reference_override to evaluate at the true limit for oracle studies.
/// The non-private baseline flows through the same formula with V = tau I
/// (tau = 1e-12) and Wbar = 0.
CostReport total_private_cost(const NetworkModel& net, const SynthesisResult& synth);
CostReport total_private_cost(const NetworkModel& net, const SynthesisResult& synth,
                              const Vector& reference_override);

/// Corollary form of the cost of privacy:
/// tr(K Sigma + (Q-K) SigmaBar) - tr(K W) + tr(Q Wbar) + tr(H'RH Wbar).
double privacy_overhead(const NetworkModel& net, const SynthesisResult& synth);

/// Sandwich on d(DeltaJ)/d(epsilon) with epsilon = epsbar, delta = deltabar
/// and a single sensitivity tying sigma = sigmabar.
struct RateBounds {
    double lower = 0, upper = 0;
    double dsigma_deps = 0;  // < 0 always
    Matrix P, U, F, Pbar, Fbar, Ubar;
};

/// Requires spectral radius of A < 1 and diagonal C. Sigma and V are
/// recomputed at the given epsilon; the controller-side quantities obey
/// certainty equivalence and come from synth.
RateBounds cost_rate_bounds(double epsilon, double delta, double sensitivity,
                            const NetworkModel& net, const SynthesisResult& synth);

/// Five-point-stencil derivative of the privacy overhead at epsilon,
/// rebuilding sigma = sigmabar at each stencil node. Default step 1e-3 * eps.
double cost_rate_numeric(double epsilon, double delta, double sensitivity,
                         const NetworkModel& net, double h = 0.0);

/// Privacy overhead of the network with V and Wbar rebuilt at the given
/// epsilon (sigma = sigmabar tied through one sensitivity).
double privacy_overhead_at_epsilon(double epsilon, double delta, double sensitivity,
                                   const NetworkModel& net);

}  // namespace dplqg
