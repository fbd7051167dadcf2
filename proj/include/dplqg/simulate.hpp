#pragma once

#include <cstdint>
#include <vector>

#include "dplqg/model.hpp"
#include "dplqg/synthesis.hpp"

namespace dplqg {

enum class ReferenceProfile {
    tanh_ramp,  // xbar_i(k) = tanh(k) * xbar_i
    constant,   // xbar_i(k) = xbar_i
};

/// A full simulation request. Per-run noise comes from substreams derived
/// from (seed, run, agent, role); the privatized reference is drawn once at
/// network assembly. Toggling privacy_noise off replaces the mechanisms with
/// zero noise and a V -> 0 filter (the non-private baseline); toggling
/// process_noise off zeroes w(k) and pins x(0) = xhat(0).
struct Scenario {
    std::vector<AgentModel> agents;
    Matrix Q, R;
    std::size_t steps = 1;
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    ReferenceProfile reference_profile = ReferenceProfile::tanh_ramp;
    bool privacy_noise = true;
    bool process_noise = true;

    void validate(const char* where) const;
};

/// Per-step record of one run. Lengths equal steps; x has one extra terminal
/// entry x(steps).
struct SimTrace {
    std::vector<Vector> x;           // states, size steps+1
    std::vector<Vector> xhat;        // posterior estimates, size steps
    std::vector<Vector> xhat_prior;  // prior estimates, size steps
    std::vector<Vector> ytilde;      // privatized outputs, size steps
    std::vector<Vector> u;           // inputs, size steps
    std::vector<Vector> v;           // privacy noises, size steps
    std::vector<Vector> w;           // process noises, size steps
    std::vector<Vector> reference;   // display reference xbar(k), size steps
    std::vector<double> cost_instant;  // (x-xbar(k))'Q(x-xbar(k)) + u'Ru
    std::vector<double> cost_running;  // prefix averages of cost_instant
};

/// Network, gains, and per-run traces for a scenario.
struct SimulationResult {
    NetworkModel net;
    SynthesisResult synth;
    std::vector<SimTrace> traces;
};

/// Algorithm-1 loop: per step each agent draws v_i(k) (agents ascending) and
/// emits ytilde_i(k); the cloud filters and computes u* = L xhat + M g; each
/// agent then draws w_i(k) and updates its state.
SimulationResult run_simulation(const Scenario& sc);

/// One run against a prepared network (used by analyses that build the
/// NetworkModel directly); run_index selects the noise substreams.
SimTrace run_single(const NetworkModel& net, const SynthesisResult& synth, const Scenario& sc,
                    std::size_t run_index);

/// Running average of (x(k)-ref(k))'Q(x(k)-ref(k)) + u(k)'R u(k), against the
/// trace's display reference profile.
std::vector<double> empirical_cost(const SimTrace& trace, const NetworkModel& net);

/// Same, against a fixed reference vector.
std::vector<double> empirical_cost(const SimTrace& trace, const NetworkModel& net,
                                   const Vector& fixed_reference);

/// Per-step squared prediction error ||x - xhat^-||^2 and estimation error
/// ||x - xhat||^2, averaged across runs.
std::pair<std::vector<double>, std::vector<double>> empirical_mse(
    const std::vector<SimTrace>& traces);

/// Display reference at step k for the aggregate network.
Vector reference_at(const NetworkModel& net, ReferenceProfile profile, std::size_t k);

}  // namespace dplqg
