#include "dplqg/gaussian.hpp"

#include <cmath>
#include <string>

#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"

namespace dplqg {

void PrivacyParams::validate(const char* where) const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw DomainError(std::string(where) + ": epsilon must be positive and finite, got " +
                          std::to_string(epsilon));
    if (!(delta > 0.0 && delta < 0.5))
        throw DomainError(std::string(where) + ": delta must lie in (0, 0.5), got " +
                          std::to_string(delta));
}

void AdjacencyParams::validate(const char* where) const {
    if (!(trajectory_radius > 0.0))
        throw DomainError(std::string(where) + ": trajectory_radius must be positive");
    if (!(static_radius > 0.0))
        throw DomainError(std::string(where) + ": static_radius must be positive");
}

double q_function(double y) {
    if (!std::isfinite(y)) throw DomainError("q_function: input must be finite");
    return 0.5 * std::erfc(y / std::sqrt(2.0));
}

namespace {
double standard_normal_pdf(double y) {
    return std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI);
}
}  // namespace

double q_inverse(double p) {
    if (!(p > 0.0 && p < 0.5))
        throw DomainError("q_inverse: argument must lie in (0, 0.5), got " + std::to_string(p));
    // Bracket [0, hi] with Q(hi) < p, then bisect to 1e-6 and polish by Newton.
    double lo = 0.0, hi = 8.0;
    while (q_function(hi) >= p) {
        hi *= 2.0;
        if (hi > 1e4) break;  // p below double-precision tail mass
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double step = (q_function(y) - p) / standard_normal_pdf(y);
        y += step;
        if (std::fabs(step) <= 1e-12 * std::max(1.0, std::fabs(y))) break;
    }
    return y;
}

NoiseScale noise_scale(const PrivacyParams& p, double sensitivity) {
    p.validate("noise_scale");
    if (sensitivity < 0.0) throw DomainError("noise_scale: sensitivity must be nonnegative");
    const double kd = q_inverse(p.delta);
    return {sensitivity / (2.0 * p.epsilon) * (kd + std::sqrt(kd * kd + 2.0 * p.epsilon))};
}

double noise_scale_derivative(const PrivacyParams& p, double sensitivity) {
    p.validate("noise_scale_derivative");
    const double kd = q_inverse(p.delta);
    const double root = std::sqrt(kd * kd + 2.0 * p.epsilon);
    return sensitivity / (2.0 * p.epsilon) * (-(kd + root) / p.epsilon + 1.0 / root);
}

double output_sensitivity(const Matrix& C, double trajectory_radius) {
    if (C.empty()) throw DimensionError("output_sensitivity: empty C");
    if (!(trajectory_radius > 0.0))
        throw DomainError("output_sensitivity: trajectory radius must be positive");
    return max_singular_value(C) * trajectory_radius;
}

}  // namespace dplqg
