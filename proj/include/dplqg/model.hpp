#pragma once

#include <cstdint>
#include <vector>

#include "dplqg/gaussian.hpp"
#include "dplqg/matrix.hpp"

namespace dplqg {

/// One agent: dynamics x(k+1) = A x(k) + B u(k) + w(k), output y = C x,
/// process noise w ~ N(0, W), plus the privacy contract it chose.
struct AgentModel {
    Matrix A, B, C, W;
    PrivacyParams trajectory_privacy;  // (eps, delta) for the output trajectory
    PrivacyParams reference_privacy;   // (epsbar, deltabar) for xbar
    AdjacencyParams adjacency;
    Vector reference_limit;            // xbar_i, shared only privatized
    Vector initial_mean;               // xhat_i(0), public
    Vector initial_state;              // x_i(0), never transmitted; optional
    bool has_initial_state = false;    // when false, x(0) ~ N(initial_mean, I)

    std::size_t state_dim() const { return A.rows(); }
    std::size_t input_dim() const { return B.cols(); }
    std::size_t output_dim() const { return C.rows(); }

    void validate(const char* where) const;
};

/// Block-diagonal aggregate of the agents plus the cost matrices. V carries
/// only privacy noise (no inherent measurement noise); Wbar is the
/// reference-privatization covariance diag(sigmabar_i^2 I).
struct NetworkModel {
    Matrix A, B, C, W, V, Wbar, Q, R;
    Vector xtilde;           // privatized reference limit (what the cloud holds)
    Vector reference_limit;  // true xbar, kept for display and oracle studies
    Vector initial_mean;

    std::vector<std::size_t> state_dims, input_dims, output_dims;
    std::vector<std::size_t> state_offsets, input_offsets, output_offsets;
    std::vector<double> output_noise_sigma;     // sigma_i per agent
    std::vector<double> reference_noise_sigma;  // sigmabar_i per agent

    std::size_t state_dim() const { return A.rows(); }
    std::size_t input_dim() const { return B.cols(); }
    std::size_t output_dim() const { return C.rows(); }
    std::size_t num_agents() const { return state_dims.size(); }

    /// Wraps already-aggregated matrices as a one-agent network; used for
    /// analyses on hand-built systems.
    static NetworkModel from_single_block(Matrix A, Matrix B, Matrix C, Matrix W, Matrix V,
                                          Matrix Wbar, Matrix Q, Matrix R, Vector xtilde);

    void validate(const char* where) const;
};

/// Builds the network: block-diagonal A, B, C, W; V from each agent's
/// calibrated output-noise scale; Wbar from the static scales; xtilde drawn
/// once with the (seed, agent, reference_noise) stream.
NetworkModel assemble_network(const std::vector<AgentModel>& agents, Matrix Q, Matrix R,
                              std::uint64_t seed);

}  // namespace dplqg
