#pragma once

#include <cstdint>
#include <string>

#include "dplqg/results.hpp"
#include "dplqg/simulate.hpp"

namespace dplqg {

/// The 100-vehicle traffic-monitoring scenario: double-integrator agents at
/// sampling period 0.1, C = W = I, privacy (ln 3, 0.001) on outputs and
/// (ln 3, 0.2) on the reference limit [1, 1], R = 0.1 I, Q diagonal 500 with
/// seeded off-diagonal coupling, tanh reference ramp, 100 steps.
Scenario case_study_scenario(std::uint64_t seed, std::size_t num_agents = 100,
                             std::size_t steps = 100);

/// One agent block of the case study (A = [[1, 0.1], [0, 1]], C = W = I2)
/// with output noise calibrated at (epsilon, delta) and unit sensitivity.
NetworkModel case_study_agent_block(double epsilon, double delta);

/// Q = diagonal * I + symmetric uniform draws in [lo, hi] off the diagonal,
/// verified positive definite; the off-diagonal scale halves up to ten times
/// if the first draw is not PD.
Matrix random_coupled_q(std::size_t n, double diagonal, double lo, double hi, std::uint64_t seed);

/// Named experiment presets:
///  - "case-study":      private vs non-private cost series, agent-1 trace,
///                       prediction/estimation MSE with a priori trace bounds
///  - "table1":          tr(SigmaBar) and its bounds on the per-agent block,
///                       delta = 0.05, epsilon in {0.1, 0.2, 0.4, 0.6, 0.8, 1}
///  - "cost-rate-sweep": d(DeltaJ)/d(epsilon) bounds and five-point-stencil
///                       values over a 20-point grid on [0.2, 3], delta = 0.001
///  - "mse-bounds":      per-step squared prediction error against the trace
///                       bounds for the case-study network
ResultBundle run_preset(const std::string& name, std::uint64_t seed);

}  // namespace dplqg
