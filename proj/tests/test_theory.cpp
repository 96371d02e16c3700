#include <doctest.h>

#include "restartls/testbed.hpp"
#include "restartls/theory.hpp"

using namespace restartls;
using namespace restartls::theory;

namespace {

TheoryParams base_params() {
    TheoryParams tp;
    tp.eta = 0.5;
    tp.theta = 0.5;
    tp.sigma_d = 1.0;
    tp.kappa_d = 1.0;
    tp.p = 1.0;
    tp.L = 1.0;
    return tp;
}

constexpr double kRel = 1e-12;

bool close(double a, double b) { return std::abs(a - b) <= kRel * std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("alpha_bar hand values") {
    TheoryParams tp = base_params();
    CHECK(close(alpha_bar(tp, 1.0), 1.0 / 3.0)); // 2*0.5*1 / (2 + 1)

    tp.sigma_phi = 0.5;
    // 2*0.5*1*0.25 / (2*1.5 + 2.25) = 0.25/5.25
    CHECK(close(alpha_bar(tp, 1.0), 0.25 / 5.25));
    CHECK(close(alpha_bar(tp, 1.0), 0.047619047619047616));
}

TEST_CASE("alpha_bar decreases when kappa_d grows") {
    TheoryParams tp = base_params();
    tp.sigma_phi = 0.3;
    double prev = alpha_bar_p(tp);
    for (double k : {2.0, 4.0, 8.0, 64.0, 1024.0}) {
        tp.kappa_d = k;
        double cur = alpha_bar_p(tp);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("alpha_bar stays in (0, 1] over admissible parameters") {
    Rng rng(2024);
    for (int t = 0; t < 2000; ++t) {
        TheoryParams tp;
        tp.eta = rng.uniform(1e-6, 0.5);
        tp.theta = rng.uniform(1e-3, 0.999);
        tp.sigma_d = rng.uniform(1e-9, 1.0);
        tp.kappa_d = rng.uniform(1.0, 1e6);
        tp.p = rng.uniform(0.0, 2.0);
        tp.sigma_phi = rng.uniform(0.0, 0.999);
        tp.L = rng.uniform(1e-6, 1e4);
        double ab = alpha_bar_p(tp);
        CHECK(ab > 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("alpha_bar_1 equals alpha_bar at sigma_d = kappa_d = p = 1 for any sigma_phi") {
    for (double sp : {0.0, 0.1, 0.5, 0.9}) {
        TheoryParams tp = base_params();
        tp.sigma_phi = sp;
        tp.sigma_d = 0.2;
        tp.kappa_d = 400.0;
        tp.p = 0.25;
        TheoryParams unit = tp;
        unit.sigma_d = 1.0;
        unit.kappa_d = 1.0;
        unit.p = 1.0;
        CHECK(alpha_bar_1(tp) == alpha_bar_p(unit));
        // closed form of the restarted floor
        double expect = 2.0 * (1.0 - tp.eta) * (1.0 - sp) * (1.0 - sp) /
                        (2.0 * (1.0 + sp) + tp.L * (1.0 + sp) * (1.0 + sp));
        CHECK(close(alpha_bar_1(tp), expect));
    }
}

TEST_CASE("decrease constants hand values") {
    TheoryParams tp = base_params();
    tp.sigma_phi = 0.5;
    auto dc = decrease_constants(tp);
    REQUIRE(dc.c_N.has_value());
    // c_N = 0.5 * 1 * (0.25/0.5) * min{1, 0.5 * 0.047619} = 0.0059523809...
    CHECK(close(*dc.c_N, 0.005952380952380952));
    CHECK(close(dc.c_R, 0.011904761904761904));
}

TEST_CASE("c_R saturates at eta when theta * alpha_bar_1 >= 1") {
    // alpha_bar_1 <= 1 always, so force the min the other way with theta ~ 1
    // impossible; instead check the min arm analytically by construction.
    TheoryParams tp = base_params();
    tp.sigma_phi = 0.0;
    tp.L = 1e-9; // alpha_bar_1 -> 2(1-eta)/2 = 0.5 as L -> 0
    auto dc = decrease_constants(tp);
    CHECK(dc.c_R == tp.eta * std::min(1.0, tp.theta * alpha_bar_1(tp)));
}

TEST_CASE("c_N is undefined at sigma_phi = 0 with p > 0, defined at p = 0") {
    TheoryParams tp = base_params();
    tp.sigma_phi = 0.0;
    tp.p = 1.0;
    CHECK_FALSE(decrease_constants(tp).c_N.has_value());
    tp.p = 0.0;
    auto dc = decrease_constants(tp);
    REQUIRE(dc.c_N.has_value());
    CHECK(*dc.c_N > 0.0);
}

TEST_CASE("iteration budget hand values") {
    SUBCASE("zero gap gives a zero budget") {
        TheoryParams tp = base_params();
        tp.sigma_phi = 0.5;
        tp.eps_1st = 0.1;
        tp.f0 = 3.0;
        tp.f_low = 3.0;
        auto b = iteration_budget(tp);
        CHECK(b.bounded);
        CHECK(b.K_eps == 0.0);
    }
    SUBCASE("hand arithmetic with c_N = c_R = 0.01") {
        // K = ceil(2/0.01 * 100 + 2/0.01 * 100) = 40000. Constructing params
        // with those exact constants is awkward, so check the arithmetic on
        // the formula pieces directly.
        double gap = 1.0, c = 0.01, eps = 0.1, p = 1.0;
        double k = 2.0 * gap / c / (eps * eps) + 2.0 * gap / c / std::pow(eps, 1.0 + p);
        CHECK(std::ceil(k) == 40000.0);
        // eval bound with theta = 1/2 and min alpha_bar = 1/3:
        double per_iter = std::max(0.0, std::log(1.0 / 3.0) / std::log(0.5)) + 1.0;
        CHECK(std::ceil(per_iter * 40000.0) == 103399.0);
    }
    SUBCASE("noiseless budgets are unbounded") {
        TheoryParams tp = base_params();
        auto b = iteration_budget(tp);
        CHECK_FALSE(b.bounded);
        CHECK(b.eps == 0.0);
        CHECK(b.noise_gate_ok); // eps_f = 0 passes the gate trivially
    }
}

TEST_CASE("budget eps matches the closed form and the gate is computed") {
    TheoryParams tp = base_params();
    tp.sigma_phi = 0.5;
    tp.eps_1st = 1e-3;
    tp.f0 = 1.0;
    tp.f_low = 0.0;
    auto b = iteration_budget(tp);
    REQUIRE(b.bounded);
    double abp = alpha_bar_p(tp);
    double t = tp.eps_1st / (tp.sigma_phi * abp);
    CHECK(close(b.eps, std::max({t, std::pow(t, 1.0), t})));
    auto dc = decrease_constants(tp);
    double gate = std::min(*dc.c_N / 8.0 * tp.eps_1st * tp.eps_1st,
                           dc.c_R / 8.0 * tp.eps_1st * tp.eps_1st);
    tp.eps_f = gate * 0.999;
    CHECK(iteration_budget(tp).noise_gate_ok);
    tp.eps_f = gate * 1.001;
    CHECK_FALSE(iteration_budget(tp).noise_gate_ok);
}

TEST_CASE("K_eps shrinks as the constants grow and grows as eps_1st shrinks") {
    TheoryParams tp = base_params();
    tp.sigma_phi = 0.5;
    tp.f0 = 2.0;
    tp.f_low = 0.0;
    tp.eps_1st = 1e-2;
    double k1 = iteration_budget(tp).K_eps;
    tp.eps_1st = 1e-3;
    double k2 = iteration_budget(tp).K_eps;
    CHECK(k2 > k1);
    // larger L shrinks alpha_bar and with it both constants, so K grows
    tp.L = 10.0;
    CHECK(iteration_budget(tp).K_eps > k2);
}

TEST_CASE("verify_trace passes on the noiseless quadratic and catches a fabricated cap") {
    SolverConfig cfg;
    cfg.engine.kind = EngineKind::GD;
    auto sp = ScaledProblem{testbed::detail::diag_quadratic("q", 10, 1.0, Vec(10, 1.0)), 1.0};
    RunResult rr = run(sp, cfg, 0);
    REQUIRE(rr.status == RunStatus::Converged);
    auto rep = verify_trace(rr);
    CHECK(rep.verifiable);
    CHECK(rep.pass());
    CHECK(rep.gated_restarted + rep.gated_nonrestarted == rr.iterations);

    // inject a backtrack count above the cap
    RunResult bad = rr;
    bad.trace[2].j = 40;
    auto rep_bad = verify_trace(bad);
    CHECK_FALSE(rep_bad.pass());
    REQUIRE(rep_bad.backtrack_violations.size() == 1);
    CHECK(rep_bad.backtrack_violations[0] == 2);

    // and a fabricated increase
    RunResult worse = rr;
    worse.trace[3].f_true = worse.trace[2].f_true - 1.0;
    CHECK_FALSE(verify_trace(worse).decrease_violations.empty());
}

TEST_CASE("verify_trace reports runs without metadata as not verifiable") {
    SolverConfig cfg;
    cfg.engine.kind = EngineKind::GD;
    auto rr = run(scale(testbed::find("rosenbrock2")), cfg, 0); // no L
    auto rep = verify_trace(rr);
    CHECK_FALSE(rep.verifiable);
    CHECK_FALSE(rep.reason.empty());
}

TEST_CASE("adaptive-accuracy lbfgsr run meets the iteration budget on the quadratic") {
    auto sp = ScaledProblem{testbed::detail::diag_quadratic("q", 10, 1.0, Vec(10, 1.0)), 1.0};
    TheoryParams tp = base_params();
    tp.sigma_d = 1e-6;
    tp.kappa_d = 1e6;
    tp.sigma_phi = 0.5;
    tp.eps_1st = 1e-3;
    tp.f0 = sp.f(sp.x0());
    tp.f_low = 0.0;

    SolverConfig cfg;
    cfg.engine.kind = EngineKind::LBFGS;
    cfg.sigma_d = tp.sigma_d;
    cfg.kappa_d = tp.kappa_d;
    cfg.p = tp.p;
    cfg.eps_g = tp.eps_1st;
    cfg.enforce_adaptive_accuracy = true;
    cfg.sigma_phi = tp.sigma_phi;
    cfg.alpha_bar_p = alpha_bar_p(tp);
    auto dc = decrease_constants(tp);
    REQUIRE(dc.c_N.has_value());
    tp.eps_f = 0.9 * std::min(*dc.c_N / 8.0 * std::pow(tp.eps_1st, 1.0 + tp.p),
                              dc.c_R / 8.0 * tp.eps_1st * tp.eps_1st);
    cfg.eps_f = tp.eps_f;

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        RunResult rr = run(sp, cfg, seed);
        auto rep = verify_trace(rr, tp);
        CAPTURE(seed);
        CHECK(rep.pass());
        CHECK(rep.budget_applicable);
        CHECK(rep.budget_ok);
    }
}
