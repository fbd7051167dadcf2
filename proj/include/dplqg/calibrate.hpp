#pragma once

#include <string>

#include "dplqg/bounds.hpp"
#include "dplqg/model.hpp"
#include "dplqg/synthesis.hpp"

namespace dplqg {

/// What a calibration run is asked to achieve.
struct CalibrationTarget {
    enum class Kind { apriori_mse, aposteriori_mse, cost_cap };
    Kind kind = Kind::apriori_mse;
    double lower = 0.0;         // B_l (ignored for cost_cap)
    double upper = 0.0;         // B_u, or alpha for cost_cap
    double delta = 0.05;        // must lie in [1e-5, 0.1] per the guidelines
    double sensitivity = 1.0;   // Delta (l2 output sensitivity)
};

/// Feasible epsilon interval plus the eta quantities behind it. Emptiness is
/// an explicit status so target sweeps stay total.
struct EpsilonRange {
    enum class Status { feasible, infeasible };
    Status status = Status::infeasible;
    double lower = 0.0;
    double upper = 0.0;  // may be +inf
    double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0, eta4 = 0.0, eta5 = 0.0;
    std::string diagnostic;  // names the violated inequality when infeasible

    bool feasible() const { return status == Status::feasible; }
};

/// Sufficient epsilon interval keeping tr(Sigma) inside [B_l, B_u]:
///   (1/8)((1+sqrt(36 eta2+1))/eta2)^2 <= eps <= 1/eta1.
EpsilonRange epsilon_range_apriori(const CalibrationTarget& target, const Matrix& A,
                                   const Matrix& W, const ExtremalChannel& ch);

/// Sufficient epsilon interval keeping tr(SigmaBar) inside [B_l, B_u], via
/// eta3 and eta4.
EpsilonRange epsilon_range_aposteriori(const CalibrationTarget& target, std::size_t n,
                                       const Matrix& W, const ExtremalChannel& ch);

/// Network-level ranges for heterogeneous sensitivities: each agent is
/// calibrated with its own Delta and the result is the intersection
/// (conservative). With strict_paper the inputs must be homogeneous
/// (identical sensitivities), matching the single-Delta statement of the
/// guarantees exactly.
EpsilonRange epsilon_range_apriori_network(const CalibrationTarget& target,
                                           const NetworkModel& net,
                                           const std::vector<double>& sensitivities,
                                           bool strict_paper = false);
EpsilonRange epsilon_range_aposteriori_network(const CalibrationTarget& target,
                                               const NetworkModel& net,
                                               const std::vector<double>& sensitivities,
                                               bool strict_paper = false);

/// Minimum epsilon guaranteeing J~ <= alpha with sigma = sigmabar tied:
///   eps >= (1/8)((1+sqrt(36 eta5+1))/eta5)^2.
/// Throws InfeasibilityError when alpha is below the irreducible cost terms.
EpsilonRange epsilon_for_cost(double alpha, const NetworkModel& net, const SynthesisResult& synth,
                              double delta, double sensitivity);

struct ValidationReport {
    double epsilon = 0.0;
    double sigma = 0.0;
    double trace_sigma = 0.0;
    double trace_sigma_bar = 0.0;
    double total_cost = 0.0;
    bool pass = false;
    std::string detail;
};

/// Closes the loop: rebuilds the noise at epsilon, solves the exact DAREs
/// (and the total cost for cost_cap targets), and checks the target.
ValidationReport validate_epsilon(double epsilon, const CalibrationTarget& target,
                                  const NetworkModel& net);

}  // namespace dplqg
