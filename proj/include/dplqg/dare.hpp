#pragma once

#include "dplqg/matrix.hpp"

namespace dplqg {

struct DareOptions {
    double iterate_tolerance = 1e-10;      // absolute, on max-abs iterate difference
    double residual_tolerance = 1e-8;      // relative, on the fixed-point residual
    int max_iterations = 100000;
};

/// Unique positive semidefinite solution K of
///   K = A^T K A - A^T K B (R + B^T K B)^-1 B^T K A + Q
/// by damped fixed-point iteration on the information form
///   K <- A^T (K^-1 + B R^-1 B^T)^-1 A + Q, starting from Q.
/// Requires Q, R symmetric positive definite.
Matrix solve_control_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                          const DareOptions& opts = {});

/// Unique positive semidefinite solution Sigma of
///   Sigma = A Sigma A^T - A Sigma C^T (C Sigma C^T + V)^-1 C Sigma A^T + W
/// by damped fixed-point iteration on the information form
///   Sigma <- A (Sigma^-1 + C^T V^-1 C)^-1 A^T + W, starting from W.
/// Requires W, V symmetric positive definite. Guarantees Sigma >= W.
Matrix solve_filter_dare(const Matrix& A, const Matrix& C, const Matrix& V, const Matrix& W,
                         const DareOptions& opts = {});

/// ||K - (A^T K A - A^T K B (R+B^T K B)^-1 B^T K A + Q)||_F
double control_dare_residual(const Matrix& K, const Matrix& A, const Matrix& B, const Matrix& Q,
                             const Matrix& R);

/// ||Sigma - (A Sigma A^T - A Sigma C^T (C Sigma C^T+V)^-1 C Sigma A^T + W)||_F
double filter_dare_residual(const Matrix& Sigma, const Matrix& A, const Matrix& C, const Matrix& V,
                            const Matrix& W);

}  // namespace dplqg
