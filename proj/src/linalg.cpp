#include "dplqg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dplqg/errors.hpp"

namespace dplqg {

namespace {

double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

// One cyclic Jacobi pass over all upper-triangle pairs.
void jacobi_sweep(Matrix& a, Matrix* vecs) {
    const std::size_t n = a.rows();
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            if (apq == 0.0) continue;
            const double app = a(p, p), aqq = a(q, q);
            const double theta = (aqq - app) / (2.0 * apq);
            const double t = (theta >= 0 ? 1.0 : -1.0) /
                             (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            const double tau = s / (1.0 + c);
            a(p, p) = app - t * apq;
            a(q, q) = aqq + t * apq;
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                if (r != p && r != q) {
                    const double arp = a(r, p), arq = a(r, q);
                    a(r, p) = arp - s * (arq + tau * arp);
                    a(p, r) = a(r, p);
                    a(r, q) = arq + s * (arp - tau * arq);
                    a(q, r) = a(r, q);
                }
                if (vecs) {
                    const double vrp = (*vecs)(r, p), vrq = (*vecs)(r, q);
                    (*vecs)(r, p) = vrp - s * (vrq + tau * vrp);
                    (*vecs)(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
}

void jacobi(Matrix a, Vector& values, Matrix* vecs) {
    const std::size_t n = a.rows();
    const double thresh = 1e-12 * std::max(a.frobenius_norm(), 1e-300);
    if (vecs) *vecs = Matrix::identity(n);
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    while (offdiag_norm(a) > thresh && sweep++ < kMaxSweeps) jacobi_sweep(a, vecs);

    values.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    Vector sorted(n);
    for (std::size_t k = 0; k < n; ++k) sorted[k] = a(order[k], order[k]);
    if (vecs) {
        Matrix vs(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t r = 0; r < n; ++r) vs(r, k) = (*vecs)(r, order[k]);
        *vecs = vs;
    }
    values = sorted;
}

struct LuFactors {
    Matrix lu;                     // L below diagonal (unit), U on/above
    std::vector<std::size_t> piv;  // row permutation
    int sign = 1;
    bool singular = false;
};

LuFactors lu_factor(const Matrix& a) {
    LuFactors f;
    f.lu = a;
    const std::size_t n = a.rows();
    f.piv.resize(n);
    std::iota(f.piv.begin(), f.piv.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::fabs(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(f.lu(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            return f;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
            std::swap(f.piv[k], f.piv[p]);
            f.sign = -f.sign;
        }
        const double pivot = f.lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = f.lu(i, k) / pivot;
            f.lu(i, k) = m;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

Vector lu_solve_one(const LuFactors& f, const Vector& b) {
    const std::size_t n = b.size();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.piv[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

Vector lu_solve_transpose(const LuFactors& f, const Vector& b) {
    // Solves a^T x = b using P a = L U  =>  a^T = U^T L^T P.
    const std::size_t n = b.size();
    Vector y = b;
    for (std::size_t i = 0; i < n; ++i) {  // U^T y = b (forward)
        for (std::size_t j = 0; j < i; ++j) y[i] -= f.lu(j, i) * y[j];
        y[i] /= f.lu(i, i);
    }
    for (std::size_t i = n; i-- > 0;)  // L^T z = y (backward, unit diagonal)
        for (std::size_t j = i + 1; j < n; ++j) y[i] -= f.lu(j, i) * y[j];
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[f.piv[i]] = y[i];
    return x;
}

// Condition estimate s1/sn via power iteration on a^T a and inverse power
// iteration through the LU factors.
double condition_estimate(const Matrix& a, const LuFactors& f) {
    const std::size_t n = a.rows();
    Vector v(n, 1.0);
    double s1 = 0.0;
    for (int it = 0; it < 30; ++it) {
        Vector w = a * v;
        w = a.transpose() * w;
        const double nw = norm2(w);
        if (nw == 0.0) return std::numeric_limits<double>::infinity();
        v = (1.0 / nw) * w;
        s1 = std::sqrt(nw);
    }
    Vector u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = (i % 2 == 0) ? 1.0 : -1.0;
    double inv_growth = 0.0;
    for (int it = 0; it < 30; ++it) {
        Vector w = lu_solve_one(f, u);
        w = lu_solve_transpose(f, w);
        const double nw = norm2(w);
        if (nw == 0.0) break;
        u = (1.0 / nw) * w;
        inv_growth = nw;
    }
    if (inv_growth == 0.0) return std::numeric_limits<double>::infinity();
    const double sn = 1.0 / std::sqrt(inv_growth);
    return s1 / sn;
}

}  // namespace

Spectrum sym_eig(const Matrix& m) {
    require_symmetric(m, "sym_eig");
    Spectrum s;
    jacobi(m, s.eigenvalues, nullptr);
    return s;
}

EigenDecomposition sym_eig_full(const Matrix& m) {
    require_symmetric(m, "sym_eig_full");
    EigenDecomposition d;
    jacobi(m, d.eigenvalues, &d.eigenvectors);
    return d;
}

double max_singular_value(const Matrix& m) {
    if (m.empty()) throw DimensionError("max_singular_value: empty matrix");
    // Work with the smaller Gram matrix.
    const Matrix g = m.rows() <= m.cols() ? Matrix(m * m.transpose())
                                          : Matrix(m.transpose() * m);
    const Spectrum s = sym_eig(g.symmetrized());
    return std::sqrt(std::max(0.0, s.max()));
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
    require_square(a, "solve_linear");
    if (a.rows() != b.rows()) throw DimensionError("solve_linear: rhs row mismatch");
    const LuFactors f = lu_factor(a);
    if (f.singular)
        throw SingularityError("solve_linear: matrix is singular (zero pivot)",
                               std::numeric_limits<double>::infinity());
    const double cond = condition_estimate(a, f);
    if (cond >= 1e12)
        throw SingularityError("solve_linear: condition estimate " + std::to_string(cond) +
                                   " exceeds 1e12",
                               cond);
    Matrix x(a.rows(), b.cols());
    Vector col(a.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) col[i] = b(i, j);
        const Vector xj = lu_solve_one(f, col);
        for (std::size_t i = 0; i < a.rows(); ++i) x(i, j) = xj[i];
    }
    return x;
}

Vector solve_linear(const Matrix& a, const Vector& b) {
    const Matrix x = solve_linear(a, Matrix::column(b));
    Vector out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = x(i, 0);
    return out;
}

Matrix cholesky(const Matrix& m) {
    require_symmetric(m, "cholesky");
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0)
                    throw DefinitenessError("cholesky: matrix is not positive definite (pivot " +
                                            std::to_string(s) + " at index " + std::to_string(i) +
                                            ")");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

Matrix spd_inverse(const Matrix& m) {
    const Matrix l = cholesky(m);
    const std::size_t n = m.rows();
    // Invert the lower-triangular factor, then X^-1 = L^-T L^-1.
    Matrix linv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        linv(i, i) = 1.0 / l(i, i);
        for (std::size_t j = 0; j < i; ++j) {
            double s = 0.0;
            for (std::size_t k = j; k < i; ++k) s -= l(i, k) * linv(k, j);
            linv(i, j) = s / l(i, i);
        }
    }
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = i; k < n; ++k) s += linv(k, i) * linv(k, j);
            inv(i, j) = s;
            inv(j, i) = s;
        }
    return inv;
}

double logdet(const Matrix& m) {
    const Matrix l = cholesky(m);  // throws DefinitenessError on non-PD input
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::log(l(i, i));
    return 2.0 * s;
}

double determinant(const Matrix& m) {
    require_square(m, "determinant");
    const LuFactors f = lu_factor(m);
    if (f.singular) return 0.0;
    double d = f.sign;
    for (std::size_t i = 0; i < m.rows(); ++i) d *= f.lu(i, i);
    return d;
}

double spectral_radius_estimate(const Matrix& m, int squarings) {
    require_square(m, "spectral_radius_estimate");
    // rho(M) = lim ||M^k||^(1/k); repeated squaring with renormalization.
    Matrix x = m;
    double log_scale = 0.0;  // log ||M^(2^j)||_F accumulated
    double k = 1.0;
    for (int j = 0; j < squarings; ++j) {
        const double nx = x.frobenius_norm();
        if (nx == 0.0) return 0.0;
        if (!std::isfinite(nx)) break;
        log_scale += std::log(nx);
        x *= (1.0 / nx);
        x = x * x;
        k *= 2.0;
        log_scale *= 2.0;
    }
    const double nx = x.frobenius_norm();
    if (nx == 0.0) return 0.0;
    return std::exp((log_scale + std::log(nx)) / k);
}

}  // namespace dplqg
