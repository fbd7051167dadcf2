#pragma once

#include "dplqg/matrix.hpp"

namespace dplqg {

/// Real eigenvalues of a symmetric matrix, sorted ascending.
struct Spectrum {
    Vector eigenvalues;
    double min() const { return eigenvalues.front(); }
    double max() const { return eigenvalues.back(); }
};

struct EigenDecomposition {
    Vector eigenvalues;   // ascending
    Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

/// Cyclic Jacobi rotations; off-diagonal threshold 1e-12 * ||m||_F.
Spectrum sym_eig(const Matrix& m);
EigenDecomposition sym_eig_full(const Matrix& m);

/// Largest singular value s1(m) >= 0 (sqrt of the top eigenvalue of m^T m).
double max_singular_value(const Matrix& m);

/// Solves a x = b by Gaussian elimination with partial pivoting. Rejects
/// systems whose condition estimate (ratio of extreme singular values)
/// reaches 1e12.
Matrix solve_linear(const Matrix& a, const Matrix& b);
Vector solve_linear(const Matrix& a, const Vector& b);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
Matrix cholesky(const Matrix& m);

/// Inverse of a symmetric positive definite matrix via Cholesky.
Matrix spd_inverse(const Matrix& m);

/// ln det of a symmetric positive definite matrix (sum of log eigenvalues,
/// computed as twice the log-diagonal sum of the Cholesky factor).
double logdet(const Matrix& m);

/// Determinant via LU with partial pivoting (general square matrix).
double determinant(const Matrix& m);

/// Spectral radius estimate for a general square matrix by normalized
/// repeated squaring of the matrix, accurate enough for stability checks
/// and diagnostics.
double spectral_radius_estimate(const Matrix& m, int squarings = 40);

}  // namespace dplqg
