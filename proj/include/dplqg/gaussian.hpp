#pragma once

#include "dplqg/matrix.hpp"

namespace dplqg {

/// Differential-privacy parameters: epsilon > 0, delta in (0, 1/2).
struct PrivacyParams {
    double epsilon = 1.0;
    double delta = 0.05;
    void validate(const char* where) const;
};

/// Adjacency radii: b (l2 over trajectories) and beta (2-norm over vectors).
struct AdjacencyParams {
    double trajectory_radius = 1.0;  // b
    double static_radius = 1.0;      // beta
    void validate(const char* where) const;
};

/// Standard deviation of the Gaussian mechanism's noise.
struct NoiseScale {
    double sigma = 0.0;
};

/// Gaussian upper-tail probability Q(y) = P[Z > y], Z ~ N(0,1).
double q_function(double y);

/// Inverse of q_function on (0, 0.5); bracketing bisection then Newton polish.
double q_inverse(double p);

/// Minimal sigma of the Gaussian mechanism:
///   sigma = (Delta / 2 eps) (K_delta + sqrt(K_delta^2 + 2 eps)),
/// K_delta = q_inverse(delta). Identical form for static data and trajectories.
NoiseScale noise_scale(const PrivacyParams& p, double sensitivity);

/// d sigma / d epsilon of the mechanism above (always negative).
double noise_scale_derivative(const PrivacyParams& p, double sensitivity);

/// l2 sensitivity bound of an output map y = C x under trajectory adjacency
/// radius b: s1(C) * b.
double output_sensitivity(const Matrix& C, double trajectory_radius);

}  // namespace dplqg
