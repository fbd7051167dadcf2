#pragma once

#include <cstdint>
#include <random>

#include "dplqg/gaussian.hpp"
#include "dplqg/matrix.hpp"

namespace dplqg {

/// Standard-normal sampler: mt19937_64 driving the Box-Muller transform
/// (u1 in (0,1] from the top 53 bits, u2 in [0,1); the sine sample is cached).
/// Both pieces are fully specified, so streams are bit-reproducible for a
/// given seed across platforms. One instance per agent and role; instances
/// are not shareable across threads but may be moved between them.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double sample();

    /// n i.i.d. N(0, sigma^2) draws.
    Vector sample_vector(std::size_t n, double sigma);

private:
    double uniform_01_open_closed();  // (0, 1]
    double uniform_01_closed_open();  // [0, 1)

    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class StreamRole : std::uint64_t {
    output_noise = 1,     // v_i(k)
    process_noise = 2,    // w_i(k)
    initial_state = 3,    // x_i(0) draw about the public mean
    reference_noise = 4,  // wbar_i privatizing xbar_i
    cost_coupling = 5,    // preset Q off-diagonal draws
};

/// splitmix64 step; the basis of all stream derivation.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-agent, per-role stream seed for one-shot draws (network assembly).
/// Adding an agent does not perturb other agents' streams.
std::uint64_t derive_agent_seed(std::uint64_t master, std::size_t agent_index, StreamRole role);

/// Per-run, per-agent, per-role stream seed for simulation draws.
std::uint64_t derive_run_seed(std::uint64_t master, std::size_t run_index, std::size_t agent_index,
                              StreamRole role);

/// Gaussian mechanism for static data: r + N(0, sigma^2 I).
Vector privatize_static(const Vector& r, const NoiseScale& scale, GaussianSampler& rng);

/// Gaussian mechanism for trajectories, applied pointwise in time by callers:
/// y(k) + N(0, sigma^2 I).
Vector privatize_output(const Vector& y, const NoiseScale& scale, GaussianSampler& rng);

}  // namespace dplqg
