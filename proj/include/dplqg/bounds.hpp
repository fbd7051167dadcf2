#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "dplqg/model.hpp"
#include "dplqg/synthesis.hpp"

namespace dplqg {

/// Extreme channels of C'V^-1 C for diagonal positive C and diagonal V:
/// index l attains the smallest C_ii^2/sigma_i^2, index u the largest.
/// Ties break toward the lowest index.
struct ExtremalChannel {
    double C_l = 0, C_u = 0;
    double sigma_l = 0, sigma_u = 0;
    std::size_t index_l = 0, index_u = 0;
};

ExtremalChannel extremal_channel(const Matrix& C, const Matrix& V);

/// Channel-sum convention inside the a priori log-det lower bound: `proof`
/// uses C_ii^2/sigma_i^2 (the dimensionally consistent form); `paper_literal`
/// uses C_ii^2/sigma_i, matching the original statement of the bound, for
/// side-by-side comparison.
enum class LogDetForm { proof, paper_literal };

/// tr(Sigma) in [trW + su^2 tr(A'A) ln(W) / (su^2 + ln(W) Cu^2),
///              trW + sl^2 tr(A'A) / Cl^2].
std::pair<double, double> apriori_trace_bounds(const Matrix& A, const Matrix& W,
                                               const ExtremalChannel& ch);

/// tr(SigmaBar) in [n su^2 / (Cu^2 + su^2/ln(W)),  n sl^2 / Cl^2].
std::pair<double, double> aposteriori_trace_bounds(std::size_t n, const Matrix& W,
                                                   const ExtremalChannel& ch);

/// ln det Sigma in [ln((det A)^2 / ((1/n)(tr W^-1 + sum C_ii^2/sigma_i^2)^n) + det W),
///                  tr(A'A) sl^2/Cl^2 + trW].
std::pair<double, double> apriori_logdet_bounds(const Matrix& A, const Matrix& W, const Matrix& C,
                                                const Matrix& V, const ExtremalChannel& ch,
                                                LogDetForm form = LogDetForm::proof);

/// ln det SigmaBar in [n ln(su^2/(Cu^2 + su^2/ln(W))),  n ln(sl^2/Cl^2)].
std::pair<double, double> aposteriori_logdet_bounds(std::size_t n, const Matrix& W,
                                                    const ExtremalChannel& ch);

/// Upper bound on tr(Sigma) implied by a cost cap alpha:
///   (alpha - xt'Q xt + g'B(R+B'KB)^-1 B'g - tr(Q Wbar) - tr(H'RH Wbar)) / ln(Q).
/// Throws InfeasibilityError when the budget is nonpositive.
double error_budget_from_cost(double alpha, const NetworkModel& net, const SynthesisResult& synth);

struct BoundPair {
    double lower, upper;
    std::optional<double> exact;
};

/// All four bound pairs, with exact DARE values filled in alongside so every
/// report is self-validating.
struct BoundReport {
    BoundPair trace_sigma;
    BoundPair trace_sigma_bar;
    BoundPair logdet_sigma;
    BoundPair logdet_sigma_bar;
    ExtremalChannel channel;
};

BoundReport compute_bound_report(const NetworkModel& net, LogDetForm form = LogDetForm::proof);

}  // namespace dplqg
