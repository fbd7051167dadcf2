#include <cmath>

#include <doctest.h>

#include "dplqg/errors.hpp"
#include "dplqg/gaussian.hpp"
#include "test_support.hpp"

using namespace dplqg;
using namespace dplqg::testing;

TEST_CASE("q_function values") {
    CHECK(q_function(0.0) == doctest::Approx(0.5));
    CHECK(q_function(3.0902) == doctest::Approx(0.001).epsilon(1e-3));
    CHECK(q_function(1.6449) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(q_function(4.0) < q_function(3.0));
    CHECK(q_function(-1.0) > 0.5);
    CHECK_THROWS_AS(q_function(std::nan("")), DomainError);
}

TEST_CASE("q_inverse values and domain") {
    CHECK(std::fabs(q_inverse(0.5 - 1e-12)) <= 1e-9);
    CHECK(q_inverse(0.001) == doctest::Approx(3.0902).epsilon(1e-4));
    CHECK(q_inverse(0.05) == doctest::Approx(1.6449).epsilon(1e-4));
    CHECK_THROWS_AS(q_inverse(0.0), DomainError);
    CHECK_THROWS_AS(q_inverse(0.5), DomainError);
    CHECK_THROWS_AS(q_inverse(-0.1), DomainError);
    CHECK_THROWS_AS(q_inverse(0.9), DomainError);
}

TEST_CASE("q_inverse . q_function is the identity on [1e-6, 6]") {
    for (double y = 1e-6; y <= 6.0; y += 0.173) {
        const double back = q_inverse(q_function(y));
        CHECK(std::fabs(back - y) <= 1e-9);
    }
    CHECK(std::fabs(q_inverse(q_function(6.0)) - 6.0) <= 1e-9);
}

TEST_CASE("noise scale reproduces the case-study values") {
    CHECK(noise_scale({std::log(3.0), 0.001}, 1.0).sigma == doctest::Approx(2.96).epsilon(0.004));
    CHECK(noise_scale({std::log(3.0), 0.2}, 1.0).sigma == doctest::Approx(1.15).epsilon(0.008));
    CHECK(noise_scale({0.1, 0.05}, 1.0).sigma == doctest::Approx(16.747).epsilon(1e-4));
}

TEST_CASE("noise scale structure") {
    CHECK(noise_scale({1.0, 0.05}, 0.0).sigma == 0.0);
    // linear in sensitivity
    const double s1 = noise_scale({0.7, 0.01}, 1.0).sigma;
    const double s3 = noise_scale({0.7, 0.01}, 3.0).sigma;
    CHECK(s3 == doctest::Approx(3.0 * s1).epsilon(1e-12));

    // strictly decreasing in epsilon and in delta
    for (double delta : {1e-5, 1e-3, 0.05, 0.1}) {
        double prev = noise_scale({0.1, delta}, 1.0).sigma;
        for (double eps = 0.2; eps <= 3.0; eps += 0.1) {
            const double cur = noise_scale({eps, delta}, 1.0).sigma;
            CHECK(cur < prev);
            prev = cur;
        }
    }
    for (double eps : {0.1, 0.5, 1.0, 3.0}) {
        double prev = noise_scale({eps, 1e-5}, 1.0).sigma;
        for (double delta : {1e-4, 1e-3, 1e-2, 0.1}) {
            const double cur = noise_scale({eps, delta}, 1.0).sigma;
            CHECK(cur < prev);
            prev = cur;
        }
    }
    CHECK_THROWS_AS(noise_scale({-1.0, 0.05}, 1.0), DomainError);
    CHECK_THROWS_AS(noise_scale({1.0, 0.6}, 1.0), DomainError);
    CHECK_THROWS_AS(noise_scale({1.0, 0.05}, -1.0), DomainError);
}

TEST_CASE("noise scale derivative is negative and matches finite differences") {
    for (double eps : {0.2, 0.5, 1.0, 2.0}) {
        for (double delta : {0.001, 0.05}) {
            const double d = noise_scale_derivative({eps, delta}, 1.0);
            CHECK(d < 0.0);
            const double h = 1e-6 * eps;
            const double fd = (noise_scale({eps + h, delta}, 1.0).sigma -
                               noise_scale({eps - h, delta}, 1.0).sigma) /
                              (2.0 * h);
            CHECK(d == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("output sensitivity") {
    CHECK(output_sensitivity(Matrix::identity(2), 1.0) == doctest::Approx(1.0));
    CHECK(output_sensitivity(Matrix::scaled_identity(3, 2.0), 0.5) == doctest::Approx(1.0));
    CHECK(output_sensitivity(Matrix::from_rows({{0.0, 2.0}, {0.0, 0.0}}), 3.0) ==
          doctest::Approx(6.0));
    CHECK_THROWS_AS(output_sensitivity(Matrix(), 1.0), DimensionError);
    CHECK_THROWS_AS(output_sensitivity(Matrix::identity(2), 0.0), DomainError);
}
