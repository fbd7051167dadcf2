#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace dplqg {

using Vector = std::vector<double>;

/// Dense real matrix, row-major. Value type: copies are deep, instances are
/// immutable-by-convention after construction and safe to share across threads.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& d);
    static Matrix scaled_identity(std::size_t n, double s);
    /// Builds from nested row lists: Matrix::from_rows({{1,2},{3,4}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix column(const Vector& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool is_square() const { return rows_ == cols_ && rows_ > 0; }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const double* data() const { return entries_.data(); }
    double* data() { return entries_.data(); }

    Matrix transpose() const;
    double trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    /// Symmetry within a relative tolerance on the largest entry.
    bool is_symmetric(double rel_tol = 1e-9) const;
    /// (X + X^T)/2; used to suppress roundoff drift in fixed-point iterations.
    Matrix symmetrized() const;

    Matrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;
    void set_block(std::size_t i0, std::size_t j0, const Matrix& m);

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    Matrix operator-() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Vector operator*(const Matrix& a, const Vector& v);

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);

/// x^T M y; dimensions must agree.
double quadratic_form(const Vector& x, const Matrix& m, const Vector& y);

void require_same_shape(const Matrix& a, const Matrix& b, const char* where);
void require_square(const Matrix& m, const char* where);
void require_symmetric(const Matrix& m, const char* where, double rel_tol = 1e-9);

}  // namespace dplqg
