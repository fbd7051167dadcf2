#include <cmath>

#include <doctest.h>

#include "dplqg/cost.hpp"
#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"
#include "dplqg/presets.hpp"
#include "test_support.hpp"

using namespace dplqg;
using namespace dplqg::testing;

namespace {

NetworkModel golden_net(double wbar = 1.0) {
    return NetworkModel::from_single_block(
        Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}),
        Matrix(1, 1, {1.0}), Matrix(1, 1, {wbar}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}),
        Vector{1.0});
}

NetworkModel stable_net(double a) {
    return NetworkModel::from_single_block(
        Matrix(1, 1, {a}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}),
        Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}),
        Vector{1.0});
}

}  // namespace

TEST_CASE("tracking gain H") {
    // L = 0, A = 0: the inverse is of I, so H = M.
    const Matrix m = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK((tracking_gain_H(Matrix(2, 2), Matrix::identity(2), Matrix(2, 2), m) - m).max_abs() <=
          1e-12);

    // scalar golden: A + BL = 0.382, H = -0.382/0.618 = -0.618
    const NetworkModel net = golden_net();
    const SynthesisResult s = synthesize(net);
    const Matrix h = tracking_gain_H(net.A, net.B, s.L, s.M);
    CHECK(h(0, 0) == doctest::Approx(-(kGolden - 1.0)).epsilon(1e-9));

    // A + BL with eigenvalue 1 is singular
    CHECK_THROWS_AS(
        tracking_gain_H(Matrix::identity(2), Matrix::identity(2), Matrix(2, 2), Matrix::identity(2)),
        SingularityError);
}

TEST_CASE("reference privacy cost") {
    const Matrix q = Matrix::identity(1), r = Matrix::identity(1);
    const Matrix h(1, 1, {-(kGolden - 1.0)});
    CHECK(reference_privacy_cost(q, r, h, Matrix(1, 1)) == 0.0);
    const double base = reference_privacy_cost(q, r, h, Matrix::identity(1));
    CHECK(base == doctest::Approx(1.0 + (kGolden - 1.0) * (kGolden - 1.0)).epsilon(1e-9));  // 1.382
    CHECK(reference_privacy_cost(q, r, h, Matrix::scaled_identity(1, 2.0)) ==
          doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("total cost on the golden system is the sum of its parts") {
    const NetworkModel net = golden_net();
    const SynthesisResult s = synthesize(net);
    const CostReport rep = total_private_cost(net, s);

    const double noise = kGolden * kGolden + (1.0 - kGolden) * (kGolden - 1.0);  // 2.236
    const double ref_term = 1.0;
    const double offset = -kGolden * kGolden / (1.0 + kGolden);  // -1.0
    const double penalty = 1.0 + (kGolden - 1.0) * (kGolden - 1.0);  // 1.382

    CHECK(rep.noise_term == doctest::Approx(noise).epsilon(1e-8));
    CHECK(rep.reference_term == doctest::Approx(ref_term).epsilon(1e-12));
    CHECK(rep.offset_term == doctest::Approx(offset).epsilon(1e-8));
    CHECK(rep.reference_penalty == doctest::Approx(penalty).epsilon(1e-8));
    CHECK(rep.total ==
          doctest::Approx(noise + ref_term + offset + penalty).epsilon(1e-10));
    CHECK(rep.total == doctest::Approx(rep.nonprivate + rep.overhead).epsilon(1e-12));
}

TEST_CASE("perfect-measurement limit: J tends to tr(KW) plus reference terms") {
    NetworkModel net = golden_net(0.0);
    net.xtilde = Vector{0.0};
    net.V = Matrix(1, 1, {1e-12});
    const SynthesisResult s = synthesize(net);
    const CostReport rep = total_private_cost(net, s);
    // Sigma -> W, SigmaBar -> 0, xbar = 0: J -> tr(K W) = K
    CHECK(rep.total == doctest::Approx(kGolden).epsilon(1e-6));
    CHECK(rep.overhead == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("privacy overhead matches the corollary and the cost difference") {
    const NetworkModel net = golden_net();
    const SynthesisResult s = synthesize(net);
    // K Sigma + (Q-K) SigmaBar - K W + 1.382 with golden values = 2.0
    const double overhead = privacy_overhead(net, s);
    CHECK(overhead == doctest::Approx(2.0).epsilon(1e-8));
    const CostReport rep = total_private_cost(net, s);
    CHECK(overhead == doctest::Approx(rep.overhead).epsilon(1e-8));
    CHECK(overhead > 0.0);
}

TEST_CASE("overhead identity holds on random systems") {
    Rng rng(67);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = rng.index(1, 4);
        const Matrix a = random_matrix_with_radius(n, rng.uniform(0.0, 0.9), rng);
        Matrix b = Matrix::identity(n);
        const NetworkModel net = NetworkModel::from_single_block(
            a, b, Matrix::identity(n), random_spd(n, rng), random_spd(n, rng),
            random_spd(n, rng, 0.1), random_spd(n, rng), random_spd(n, rng),
            [&] {
                Vector x(n);
                for (double& v : x) v = rng.normal();
                return x;
            }());
        const SynthesisResult s = synthesize(net);
        const CostReport rep = total_private_cost(net, s);
        const double overhead = privacy_overhead(net, s);
        CHECK(approx_rel(overhead, rep.overhead, 1e-8));
    }
}

TEST_CASE("overhead grows with the noise scale") {
    double prev = 0.0;
    for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
        NetworkModel net = golden_net();
        net.V = Matrix(1, 1, {sigma * sigma});
        net.Wbar = Matrix(1, 1, {sigma * sigma});
        const double o = privacy_overhead(net, synthesize(net));
        CHECK(o > prev);
        prev = o;
    }
}

TEST_CASE("case-study style network: gap matches the corollary exactly") {
    Scenario sc = case_study_scenario(5, 3, 10);  // 3 agents keep the DARE small
    const NetworkModel net = assemble_network(sc.agents, sc.Q, sc.R, sc.seed);
    const SynthesisResult s = synthesize(net);
    const CostReport rep = total_private_cost(net, s);
    CHECK(rep.total > rep.nonprivate);
    CHECK(approx_rel(rep.overhead, privacy_overhead(net, s), 1e-6));
}

TEST_CASE("five-point stencil is exact on quartics") {
    const auto quartic = [](double x) {
        return 3.0 * x * x * x * x - 2.0 * x * x * x + x * x - 7.0 * x + 2.0;
    };
    const auto dquartic = [](double x) { return 12.0 * x * x * x - 6.0 * x * x + 2.0 * x - 7.0; };
    for (double x : {0.5, 1.0, 2.0}) {
        CHECK(five_point_stencil(quartic, x, 0.1) == doctest::Approx(dquartic(x)).epsilon(1e-10));
    }
    // constant function differentiates to zero
    CHECK(five_point_stencil([](double) { return 4.2; }, 1.0, 0.01) == doctest::Approx(0.0));
}

TEST_CASE("cost rate bounds, A = 0 limit") {
    // F = 0 and U = -I kill the covariance terms; both bounds reduce to
    // dsigma/deps * 2 sigma (tr Q + tr(H'RH)).
    const NetworkModel net = NetworkModel::from_single_block(
        Matrix(1, 1, {0.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}),
        Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}),
        Vector{1.0});
    const SynthesisResult s = synthesize(net);
    const double eps = 0.8, delta = 0.01;
    const RateBounds rb = cost_rate_bounds(eps, delta, 1.0, net, s);
    CHECK(rb.F.max_abs() <= 1e-12);
    CHECK((rb.U + Matrix::identity(1)).max_abs() <= 1e-12);
    const double sigma = noise_scale({eps, delta}, 1.0).sigma;
    const Matrix h = tracking_gain_H(net.A, net.B, s.L, s.M);
    const double expected = rb.dsigma_deps * 2.0 * sigma *
                            (net.Q.trace() + (h.transpose() * net.R * h).trace());
    CHECK(rb.lower == doctest::Approx(expected).epsilon(1e-9));
    CHECK(rb.upper == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("stencil lies inside the rate bounds for a stable scalar system") {
    const NetworkModel net = stable_net(0.5);
    const SynthesisResult s = synthesize(net);
    for (double eps : {0.5, 1.0, 2.0}) {
        const RateBounds rb = cost_rate_bounds(eps, 0.001, 1.0, net, s);
        const double st = cost_rate_numeric(eps, 0.001, 1.0, net);
        const double slack = 1e-7 * std::max({1.0, std::fabs(rb.lower), std::fabs(rb.upper)});
        CHECK(st >= rb.lower - slack);
        CHECK(st <= rb.upper + slack);
        CHECK(rb.lower <= rb.upper + slack);
        CHECK(st < 0.0);  // cost falls as privacy loosens
        CHECK(rb.dsigma_deps < 0.0);
    }
}

TEST_CASE("rate bounds ordering across a parameter grid") {
    Rng rng(301);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = rng.index(1, 3);
        const Matrix a = random_matrix_with_radius(n, rng.uniform(0.1, 0.9), rng);
        const NetworkModel net = NetworkModel::from_single_block(
            a, Matrix::identity(n), Matrix::identity(n), random_spd(n, rng), Matrix::identity(n),
            Matrix::identity(n), random_spd(n, rng), random_spd(n, rng), Vector(n, 1.0));
        const SynthesisResult s = synthesize(net);
        for (double eps : {0.3, 1.0, 2.5}) {
            const RateBounds rb = cost_rate_bounds(eps, 0.001, 1.0, net, s);
            CHECK(rb.lower <= rb.upper + 1e-9 * std::fabs(rb.upper));
        }
    }
}

TEST_CASE("rate analysis preconditions") {
    const NetworkModel unstable = NetworkModel::from_single_block(
        Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}),
        Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}),
        Vector{1.0});
    const SynthesisResult s = synthesize(unstable);
    CHECK_THROWS_AS(cost_rate_bounds(1.0, 0.001, 1.0, unstable, s), DomainError);
    CHECK_THROWS_AS(cost_rate_numeric(0.001, 0.001, 1.0, unstable, 0.01), DomainError);
}
