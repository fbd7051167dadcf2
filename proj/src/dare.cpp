#include "dplqg/dare.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"

namespace dplqg {

namespace {

void require_spd(const Matrix& m, const char* name) {
    require_symmetric(m, name);
    cholesky(m);  // throws DefinitenessError when not PD
}

// Fixed-point iteration X <- (1-gamma) X + gamma F(X) at one damping level.
// Returns true on convergence. Bails out early on numeric blow-up, which a
// smaller gamma cannot repair either when no PSD solution exists.
template <typename StepFn>
bool iterate_at_gamma(Matrix& x, StepFn& step, double gamma, const DareOptions& opts,
                      double& last_diff) {
    for (int it = 0; it < opts.max_iterations; ++it) {
        Matrix next = step(x);
        if (gamma < 1.0) next = (1.0 - gamma) * x + gamma * next;
        next = next.symmetrized();
        const double diff = (next - x).max_abs();
        x = next;
        last_diff = diff;
        if (!std::isfinite(diff) || x.max_abs() > 1e120) return false;
        const double floor = 1e-14 * std::max(1.0, x.max_abs());
        if (diff <= std::max(opts.iterate_tolerance, floor)) return true;
    }
    return false;
}

// Undamped first; one damped retry covers oscillatory cases.
template <typename StepFn>
Matrix fixed_point_iterate(const Matrix& x0, StepFn step, const DareOptions& opts,
                           const char* what) {
    double last_diff = std::numeric_limits<double>::infinity();
    Matrix x = x0;
    if (iterate_at_gamma(x, step, 1.0, opts, last_diff)) return x;
    x = x0;
    if (iterate_at_gamma(x, step, 0.5, opts, last_diff)) return x;
    throw ConvergenceError(std::string(what) + ": no convergence after " +
                               std::to_string(opts.max_iterations) +
                               " iterations (final iterate difference " +
                               std::to_string(last_diff) + ")",
                           last_diff);
}

}  // namespace

double control_dare_residual(const Matrix& K, const Matrix& A, const Matrix& B, const Matrix& Q,
                             const Matrix& R) {
    const Matrix BtK = B.transpose() * K;
    const Matrix S = R + BtK * B;
    const Matrix KBSinvBtKA = K * B * solve_linear(S, BtK * A);
    const Matrix rhs = A.transpose() * (K * A - KBSinvBtKA) + Q;
    return (K - rhs).frobenius_norm();
}

double filter_dare_residual(const Matrix& Sigma, const Matrix& A, const Matrix& C, const Matrix& V,
                            const Matrix& W) {
    const Matrix CS = C * Sigma;
    const Matrix S = CS * C.transpose() + V;
    const Matrix rhs =
        A * (Sigma - CS.transpose() * solve_linear(S, CS)) * A.transpose() + W;
    return (Sigma - rhs).frobenius_norm();
}

Matrix solve_control_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                          const DareOptions& opts) {
    require_square(A, "solve_control_dare: A");
    if (B.rows() != A.rows()) throw DimensionError("solve_control_dare: B row count != n");
    if (Q.rows() != A.rows()) throw DimensionError("solve_control_dare: Q must be n x n");
    if (R.rows() != B.cols()) throw DimensionError("solve_control_dare: R must be m x m");
    require_spd(Q, "solve_control_dare: Q");
    require_spd(R, "solve_control_dare: R");

    const Matrix BRB = B * spd_inverse(R) * B.transpose();
    const Matrix At = A.transpose();
    Matrix K = fixed_point_iterate(
        Q,
        [&](const Matrix& x) { return At * spd_inverse(spd_inverse(x) + BRB) * A + Q; },
        opts, "solve_control_dare");

    const double resid = control_dare_residual(K, A, B, Q, R);
    if (resid > opts.residual_tolerance * std::max(K.frobenius_norm(), 1e-300))
        throw ConvergenceError("solve_control_dare: residual " + std::to_string(resid) +
                                   " exceeds tolerance",
                               resid);
    return K;
}

Matrix solve_filter_dare(const Matrix& A, const Matrix& C, const Matrix& V, const Matrix& W,
                         const DareOptions& opts) {
    require_square(A, "solve_filter_dare: A");
    if (C.cols() != A.rows()) throw DimensionError("solve_filter_dare: C column count != n");
    if (W.rows() != A.rows()) throw DimensionError("solve_filter_dare: W must be n x n");
    if (V.rows() != C.rows()) throw DimensionError("solve_filter_dare: V must be q x q");
    require_spd(W, "solve_filter_dare: W");
    require_spd(V, "solve_filter_dare: V");

    const Matrix CtVC = C.transpose() * spd_inverse(V) * C;
    const Matrix At = A.transpose();
    Matrix Sigma = fixed_point_iterate(
        W,
        [&](const Matrix& x) { return A * spd_inverse(spd_inverse(x) + CtVC) * At + W; },
        opts, "solve_filter_dare");

    const double resid = filter_dare_residual(Sigma, A, C, V, W);
    if (resid > opts.residual_tolerance * std::max(Sigma.frobenius_norm(), 1e-300))
        throw ConvergenceError("solve_filter_dare: residual " + std::to_string(resid) +
                                   " exceeds tolerance",
                               resid);
    return Sigma;
}

}  // namespace dplqg
