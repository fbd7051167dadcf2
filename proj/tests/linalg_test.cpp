#include <cmath>

#include <doctest.h>

#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"
#include "test_support.hpp"

using namespace dplqg;
using namespace dplqg::testing;

TEST_CASE("sym_eig on known spectra") {
    const Spectrum id3 = sym_eig(Matrix::identity(3));
    for (double v : id3.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    const Spectrum d = sym_eig(Matrix::diagonal({5.0, 2.0}));
    CHECK(d.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(d.eigenvalues[1] == doctest::Approx(5.0));

    const Spectrum s = sym_eig(Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}}));
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-10));

    CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), DimensionError);
    CHECK_THROWS_AS(sym_eig(Matrix::from_rows({{1.0, 2.0}, {0.0, 1.0}})), DimensionError);
}

TEST_CASE("sym_eig reconstruction and trace identity") {
    Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = rng.index(1, 7);
        const Matrix m = random_spd(n, rng) - Matrix::scaled_identity(n, rng.uniform(0.0, 1.0));
        const EigenDecomposition d = sym_eig_full(m);
        const Matrix recon =
            d.eigenvectors * Matrix::diagonal(d.eigenvalues) * d.eigenvectors.transpose();
        CHECK((recon - m).frobenius_norm() <= 1e-8 * std::max(m.frobenius_norm(), 1e-12));
        double sum = 0.0;
        for (double v : d.eigenvalues) sum += v;
        CHECK(approx_rel(sum, m.trace(), 1e-8));
        for (std::size_t k = 1; k < n; ++k) CHECK(d.eigenvalues[k - 1] <= d.eigenvalues[k]);
    }
}

TEST_CASE("max_singular_value") {
    CHECK(max_singular_value(Matrix::identity(2)) == doctest::Approx(1.0));
    CHECK(max_singular_value(Matrix::diagonal({3.0, -5.0})) == doctest::Approx(5.0));
    CHECK(max_singular_value(Matrix::from_rows({{0.0, 2.0}, {0.0, 0.0}})) == doctest::Approx(2.0));
    CHECK_THROWS_AS(max_singular_value(Matrix()), DimensionError);

    Rng rng(7);
    for (int t = 0; t < 10; ++t) {
        Matrix m(rng.index(1, 5), rng.index(1, 5));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
        const double s1 = max_singular_value(m);
        const double lam1 = sym_eig((m.transpose() * m).symmetrized()).max();
        CHECK(approx_rel(s1 * s1, lam1, 1e-8));
    }
}

TEST_CASE("solve_linear on known systems") {
    const Matrix b = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK((solve_linear(Matrix::identity(2), b) - b).max_abs() <= 1e-14);

    const Vector x = solve_linear(Matrix::diagonal({2.0, 4.0}), Vector{2.0, 8.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));

    const Vector y = solve_linear(Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}}), Vector{3.0, 1.0});
    CHECK(y[0] == doctest::Approx(2.0));
    CHECK(y[1] == doctest::Approx(1.0));
}

TEST_CASE("solve_linear residual property and failure modes") {
    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = rng.index(1, 6);
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
        a += Matrix::scaled_identity(n, 3.0);
        Matrix b(n, rng.index(1, 3));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) = rng.normal();
        const Matrix x = solve_linear(a, b);
        const double resid = (a * x - b).frobenius_norm();
        CHECK(resid <= 1e-9 * (a.frobenius_norm() * x.frobenius_norm() + b.frobenius_norm()));
    }

    try {
        solve_linear(Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}), Vector{1.0, 1.0});
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(e.condition_estimate > 1e12);
    }
    try {
        solve_linear(Matrix::diagonal({1.0, 1e-13}), Vector{1.0, 1.0});
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(e.condition_estimate >= 1e12);
    }
    CHECK_THROWS_AS(solve_linear(Matrix(2, 3), Vector{1.0, 1.0}), DimensionError);
}

TEST_CASE("cholesky and spd_inverse") {
    Rng rng(99);
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = rng.index(1, 6);
        const Matrix m = random_spd(n, rng);
        const Matrix l = cholesky(m);
        CHECK((l * l.transpose() - m).frobenius_norm() <= 1e-10 * m.frobenius_norm());
        const Matrix inv = spd_inverse(m);
        CHECK((m * inv - Matrix::identity(n)).max_abs() <= 1e-8);
    }
    CHECK_THROWS_AS(cholesky(Matrix::diagonal({1.0, -1.0})), DefinitenessError);
}

TEST_CASE("logdet") {
    CHECK(logdet(Matrix::identity(5)) == doctest::Approx(0.0));
    CHECK(logdet(Matrix::diagonal({std::exp(1.0), std::exp(2.0)})) == doctest::Approx(3.0));
    CHECK(logdet(Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}})) == doctest::Approx(std::log(3.0)));
    CHECK_THROWS_AS(logdet(Matrix::diagonal({1.0, 0.0})), DefinitenessError);

    // invariance under similarity by permutation
    const Matrix m = Matrix::from_rows({{3.0, 0.5, 0.0}, {0.5, 2.0, 0.1}, {0.0, 0.1, 1.5}});
    Matrix p(3, 3);
    p(0, 2) = p(1, 0) = p(2, 1) = 1.0;
    const Matrix pm = p * m * p.transpose();
    CHECK(logdet(pm) == doctest::Approx(logdet(m)).epsilon(1e-12));

    // agrees with the eigenvalue route
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        const Matrix s = random_spd(rng.index(1, 6), rng);
        double sum = 0.0;
        for (double v : sym_eig(s).eigenvalues) sum += std::log(v);
        CHECK(approx_rel(logdet(s), sum, 1e-9));
    }
}

TEST_CASE("determinant and spectral radius estimate") {
    CHECK(determinant(Matrix::diagonal({2.0, 3.0})) == doctest::Approx(6.0));
    CHECK(determinant(Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})) == doctest::Approx(-1.0));
    CHECK(determinant(Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}})) == doctest::Approx(0.0));

    CHECK(spectral_radius_estimate(Matrix::diagonal({0.3, -0.9})) == doctest::Approx(0.9).epsilon(1e-6));
    Rng rng(21);
    for (double rho : {0.2, 0.8, 1.0, 1.05}) {
        const Matrix a = random_matrix_with_radius(4, rho, rng);
        CHECK(spectral_radius_estimate(a) == doctest::Approx(rho).epsilon(1e-5));
    }
}
