#include "dplqg/matrix.hpp"

#include <cmath>
#include <string>

#include "dplqg/errors.hpp"

namespace dplqg {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries)
    : rows_(rows), cols_(cols), entries_(entries) {
    if (entries_.size() != rows * cols) {
        throw DimensionError("Matrix: initializer has " + std::to_string(entries_.size()) +
                             " entries, expected " + std::to_string(rows * cols));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::scaled_identity(std::size_t n, double s) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r > 0 ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("Matrix::from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix Matrix::column(const Vector& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::trace() const {
    require_square(*this, "trace");
    double s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : entries_) s += v * v;
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double s = 0.0;
    for (double v : entries_) s = std::max(s, std::fabs(v));
    return s;
}

bool Matrix::is_symmetric(double rel_tol) const {
    if (!is_square()) return false;
    const double scale = std::max(max_abs(), 1e-300);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
    return true;
}

Matrix Matrix::symmetrized() const {
    require_square(*this, "symmetrized");
    Matrix s(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
}

Matrix Matrix::block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
    if (i0 + r > rows_ || j0 + c > cols_) throw DimensionError("Matrix::block out of range");
    Matrix b(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
}

void Matrix::set_block(std::size_t i0, std::size_t j0, const Matrix& m) {
    if (i0 + m.rows() > rows_ || j0 + m.cols() > cols_)
        throw DimensionError("Matrix::set_block out of range");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) (*this)(i0 + i, j0 + j) = m(i, j);
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other, "operator+");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other, "operator-");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : entries_) v *= s;
    return *this;
}

Matrix Matrix::operator-() const {
    Matrix m = *this;
    for (double& v : m.entries_) v = -v;
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
        throw DimensionError("matmul: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                             " * " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    Matrix out(a.rows_, b.cols_);
    const std::size_t n = a.rows_, kk = a.cols_, mm = b.cols_;
    for (std::size_t i = 0; i < n; ++i) {
        double* outrow = out.entries_.data() + i * mm;
        for (std::size_t k = 0; k < kk; ++k) {
            const double aik = a.entries_[i * kk + k];
            if (aik == 0.0) continue;
            const double* brow = b.entries_.data() + k * mm;
            for (std::size_t j = 0; j < mm; ++j) outrow[j] += aik * brow[j];
        }
    }
    return out;
}

Vector operator*(const Matrix& a, const Vector& v) {
    if (a.cols_ != v.size()) throw DimensionError("matvec: dimension mismatch");
    Vector out(a.rows_, 0.0);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        double s = 0.0;
        const double* row = a.entries_.data() + i * a.cols_;
        for (std::size_t j = 0; j < a.cols_; ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector+: dimension mismatch");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector-: dimension mismatch");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vector operator*(double s, const Vector& a) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

double quadratic_form(const Vector& x, const Matrix& m, const Vector& y) {
    return dot(x, m * y);
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(where) + ": shape mismatch " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
}

void require_square(const Matrix& m, const char* where) {
    if (!m.is_square())
        throw DimensionError(std::string(where) + ": requires a nonempty square matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void require_symmetric(const Matrix& m, const char* where, double rel_tol) {
    require_square(m, where);
    if (!m.is_symmetric(rel_tol))
        throw DimensionError(std::string(where) + ": matrix is not symmetric within tolerance");
}

}  // namespace dplqg
