#pragma once

#include "dplqg/model.hpp"

namespace dplqg {

struct GainSet {
    Matrix K;  // control Riccati solution
    Matrix L;  // state-feedback gain, -(R+B'KB)^-1 B'KA
    Matrix M;  // offset gain, -(R+B'KB)^-1 B'
};

/// Everything the cloud precomputes before the loop starts.
struct SynthesisResult {
    Matrix K, L, M;
    Vector g;             // reference offset, solves g = A'[I-KB(R+B'KB)^-1 B']g - Q xtilde
    Matrix Sigma;         // a priori error covariance (filter DARE)
    Matrix SigmaBar;      // a posteriori, (C'V^-1 C + Sigma^-1)^-1
    Matrix kalman_gain;   // SigmaBar C' V^-1
};

/// Solves the control Riccati equation and forms L, M. Checks Assumption 1:
/// Q, R symmetric positive definite and (A, B) controllable. Gains depend
/// only on (A, B, Q, R) -- certainty equivalence.
GainSet synthesize_gains(const NetworkModel& net);

/// Direct linear solve of (I - A'[I - KB(R+B'KB)^-1 B']) g = -Q xtilde.
/// On a singular system the error reports the spectral radius of the
/// iteration matrix.
Vector solve_reference_offset(const NetworkModel& net, const Matrix& K);

/// A priori and a posteriori filter covariances (Sigma, SigmaBar).
std::pair<Matrix, Matrix> filter_covariances(const NetworkModel& net);

/// Full Algorithm-1 precomputation.
SynthesisResult synthesize(const NetworkModel& net);

/// Cloud-side filter iterate.
struct FilterState {
    Vector posterior;  // xhat(k)
    Vector prior;      // xhat^-(k)
};

/// Measurement update at k = 0 from the public prior mean.
FilterState filter_init(const SynthesisResult& synth, const NetworkModel& net,
                        const Vector& xhat0, const Vector& ytilde0);

/// Predict with (u, A, B), then correct with ytilde(k+1):
///   prior = A xhat + B u;  posterior = prior + gain (ytilde_next - C prior).
FilterState filter_step(const FilterState& state, const SynthesisResult& synth,
                        const NetworkModel& net, const Vector& u, const Vector& ytilde_next);

/// u*(k) = L xhat(k) + M g.
Vector control_input(const SynthesisResult& synth, const Vector& xhat);

/// Rank check of [B, AB, ..., A^(n-1)B] through its Gram matrix; evaluated
/// per agent block when the model carries block structure.
bool is_controllable(const Matrix& A, const Matrix& B, double threshold_ratio = 1e-10);

}  // namespace dplqg
