#include <doctest.h>

#include "restartls/linesearch.hpp"
#include "restartls/testbed.hpp"

using namespace restartls;

namespace {

ScaledProblem quad1d() {
    return ScaledProblem{testbed::detail::diag_quadratic("q1", 1, 1.0, {1.0}), 1.0};
}

} // namespace

TEST_CASE("hand-evaluated backtrack on the 1-d quadratic") {
    // f(x) = x^2/2 at x = 1, d = -1, exact g = 1, eta = theta = 1/2, eps_f = 0:
    // j = 0 tests 0 < 0 (fails), j = 1 tests 0.125 < 0.25 (accepts).
    NoisyOracle oracle(quad1d(), NoiseConfig{});
    LineSearchParams params;
    auto res = backtrack(oracle, {1.0}, {-1.0}, {1.0}, params);
    CHECK(res.j == 1);
    CHECK(res.alpha == 0.5);
    CHECK_FALSE(res.capped);
    CHECK(res.n_trials == 2);
    CHECK(oracle.n_f_evals() == 3); // f(x) plus two trials
    CHECK(res.f_at_x == 0.5);
    CHECK(res.f_at_trial == 0.125);
}

TEST_CASE("large eps_f slack accepts the unit step") {
    NoisyOracle oracle(quad1d(), NoiseConfig{});
    LineSearchParams params;
    params.eps_f = 10.0; // 2*eps_f dwarfs any change along d
    auto res = backtrack(oracle, {1.0}, {1.0}, {1.0}, params);
    CHECK(res.j == 0);
    CHECK(res.alpha == 1.0);
    CHECK_FALSE(res.capped);
}

TEST_CASE("an ascent direction with exact values caps out") {
    // f(x + a) = (1+a)^2/2 > 1/2 + a/2 for every a > 0, so no j is accepted.
    NoisyOracle oracle(quad1d(), NoiseConfig{});
    LineSearchParams params;
    params.j_max = 12;
    auto res = backtrack(oracle, {1.0}, {1.0}, {1.0}, params);
    CHECK(res.capped);
    CHECK(res.j == 12);
    CHECK(res.alpha == std::pow(0.5, 12));
    CHECK(res.n_trials == 13);
}

TEST_CASE("non-finite trial values are rejections, not errors") {
    Problem p;
    p.name = "spike";
    p.dim = 1;
    p.x0 = {0.0};
    // blows up beyond |x| > 0.3 but is a clean quadratic inside
    p.eval_f = [](const Vec& x) {
        if (std::abs(x[0]) > 0.3) return std::numeric_limits<double>::infinity();
        return 0.5 * x[0] * x[0];
    };
    p.eval_grad = [](const Vec& x) { return Vec{x[0]}; };
    NoisyOracle oracle(ScaledProblem{p, 1.0}, NoiseConfig{});
    LineSearchParams params;
    auto res = backtrack(oracle, {0.2}, {-1.0}, {0.2}, params);
    CHECK_FALSE(res.capped);
    CHECK(std::isfinite(res.f_at_trial));
    CHECK(res.alpha <= 0.5); // the unit trial leaves the finite region
}

TEST_CASE("evaluation accounting: n_trials + 1 equals the oracle delta") {
    auto sp = scale(testbed::find("rosenbrock2"));
    NoiseConfig nc;
    nc.eps_f = 1e-3;
    nc.seed = 9;
    NoisyOracle oracle(sp, nc);
    LineSearchParams params;
    params.eps_f = nc.eps_f;
    Vec x = sp.x0();
    Vec g = sp.grad(x);
    Vec d = negated(g);
    for (int rep = 0; rep < 20; ++rep) {
        long long before = oracle.n_f_evals();
        auto res = backtrack(oracle, x, d, g, params);
        CHECK(oracle.n_f_evals() - before == res.n_trials + 1);
        CHECK(res.alpha == std::pow(params.theta, res.j));
    }
}

TEST_CASE("backtrack_bound hand values") {
    CHECK(backtrack_bound(1.0, 0.5) == 1);
    CHECK(backtrack_bound(1.0 / 3.0, 0.5) == 2);    // log2(3) = 1.58, floor(2.58) = 2
    CHECK(backtrack_bound(0.9, 0.5) == 1);          // log2(1/0.9) = 0.152
    CHECK_THROWS_AS(backtrack_bound(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(backtrack_bound(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("step-size floor on the noiseless quadratic") {
    // On 0.5 L x^2 with exact values and d = -g, every failed step alpha
    // satisfies alpha >= alpha_bar, so the accepted one is >= theta*alpha_bar.
    for (double L : {0.5, 1.0, 2.0, 7.0}) {
        CAPTURE(L);
        auto prob = testbed::detail::diag_quadratic("q", 1, L, {1.0});
        NoisyOracle oracle(ScaledProblem{prob, 1.0}, NoiseConfig{});
        LineSearchParams params;
        double alpha_bar = 2.0 * (1.0 - params.eta) / (2.0 + L); // sigma_d=kappa_d=1, sigma_phi=0
        Vec x{1.0};
        Vec g = prob.eval_grad(x);
        auto res = backtrack(oracle, x, negated(g), g, params);
        CHECK_FALSE(res.capped);
        if (res.j > 0) CHECK(res.alpha >= params.theta * alpha_bar - 1e-15);
        CHECK(res.j <= backtrack_bound(alpha_bar, params.theta));
    }
}
