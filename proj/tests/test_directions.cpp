#include <doctest.h>

#include "restartls/directions.hpp"
#include "support.hpp"

using namespace restartls;

TEST_CASE("gradient descent proposes the plain negation") {
    DirectionEngine e(EngineConfig{EngineKind::GD});
    CHECK(same_vector(e.propose({3.0, -4.0}), Vec{-3.0, 4.0}));
}

TEST_CASE("prp_plus_beta hand values") {
    CHECK(prp_plus_beta({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    CHECK(prp_plus_beta({0.0, 1.0}, {1.0, 0.0}) == 1.0);
    CHECK(prp_plus_beta({1.0, 0.0}, {0.0, 2.0}) == 0.25);
    CHECK(prp_plus_beta({1.0, 0.0}, {0.0, 0.0}) == 0.0); // zero old gradient
    // negative raw value truncates to zero
    CHECK(prp_plus_beta({0.5, 0.0}, {1.0, 0.0}) == 0.0);
}

TEST_CASE("nlcg builds the conjugate direction from the committed state") {
    EngineConfig cfg;
    cfg.kind = EngineKind::NLCG_PRP_PLUS;
    DirectionEngine e(cfg);
    Vec g0{1.0, 0.0};
    Vec d0 = e.propose(g0);
    CHECK(same_vector(d0, Vec{-1.0, 0.0})); // no state yet
    e.commit_direction(d0, g0);

    Vec g1{0.0, 1.0};
    Vec d1 = e.propose(g1);
    // beta = g1'(g1 - g0)/||g0||^2 = 1, d1 = -g1 + 1*d0 = (-1, -1)
    CHECK(same_vector(d1, Vec{-1.0, -1.0}));

    e.reset_on_restart();
    CHECK(same_vector(e.propose({1.0, 1.0}), Vec{-1.0, -1.0})); // back to -g
}

TEST_CASE("nlcg with beta forced to zero is plain steepest descent") {
    EngineConfig cfg;
    cfg.kind = EngineKind::NLCG_PRP_PLUS;
    cfg.force_beta_zero = true;
    DirectionEngine e(cfg);
    Vec g0{2.0, -1.0};
    Vec d0 = e.propose(g0);
    CHECK(same_vector(d0, negated(g0)));
    e.commit_direction(d0, g0);
    Vec g1{0.5, 0.25};
    CHECK(same_vector(e.propose(g1), negated(g1)));
}

TEST_CASE("lbfgs with empty memory proposes -g; one unit pair reproduces it") {
    EngineConfig cfg;
    cfg.kind = EngineKind::LBFGS;
    DirectionEngine e(cfg);
    CHECK(same_vector(e.propose({1.0, 2.0}), Vec{-1.0, -2.0}));

    // 1-d quadratic f = x^2/2: s = 1, y = 1, gamma = 1, H = identity
    DirectionEngine e1(cfg);
    e1.update_state({1.0}, {2.0}, {1.0}, {2.0});
    REQUIRE(e1.pairs().size() == 1);
    Vec d = e1.propose({3.0});
    CHECK(d[0] == doctest::Approx(-3.0).epsilon(1e-15));
}

TEST_CASE("cautious pair storage") {
    EngineConfig cfg;
    cfg.kind = EngineKind::LBFGS;
    cfg.eps_sy = 1e-4;

    SUBCASE("negative curvature is skipped") {
        DirectionEngine e(cfg);
        e.update_state({0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}); // y = (-1, 0)
        CHECK(e.pairs().empty());
    }
    SUBCASE("aligned pair is accepted") {
        DirectionEngine e(cfg);
        e.update_state({0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}); // s = y = (1, 0)
        CHECK(e.pairs().size() == 1);
    }
    SUBCASE("zero step or zero y is skipped") {
        DirectionEngine e(cfg);
        e.update_state({1.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}, {1.0, 0.0});
        CHECK(e.pairs().empty());
        e.update_state({0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {1.0, 1.0});
        CHECK(e.pairs().empty());
    }
    SUBCASE("memory evicts the oldest pair") {
        cfg.memory = 2;
        DirectionEngine e(cfg);
        e.update_state({0.0}, {1.0}, {0.0}, {1.0});
        e.update_state({1.0}, {3.0}, {1.0}, {3.0});
        e.update_state({3.0}, {4.0}, {3.0}, {4.0});
        REQUIRE(e.pairs().size() == 2);
        CHECK(e.pairs().front().s[0] == 2.0); // the (0,1) pair is gone
        CHECK(e.pairs().back().s[0] == 1.0);
    }
}

TEST_CASE("restart handling of lbfgs memory follows the flag") {
    EngineConfig cfg;
    cfg.kind = EngineKind::LBFGS;
    DirectionEngine keep(cfg);
    keep.update_state({0.0}, {1.0}, {0.0}, {1.0});
    keep.reset_on_restart();
    CHECK(keep.pairs().size() == 1);

    cfg.keep_memory_on_restart = false;
    DirectionEngine flush(cfg);
    flush.update_state({0.0}, {1.0}, {0.0}, {1.0});
    flush.reset_on_restart();
    CHECK(flush.pairs().empty());
}

TEST_CASE("two-loop recursion matches the dense BFGS product") {
    Rng rng(424242);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform01() * 4.0); // 2..5
        int pairs = 1 + static_cast<int>(rng.uniform01() * 3.0); // 1..3
        EngineConfig cfg;
        cfg.kind = EngineKind::LBFGS;
        DirectionEngine e(cfg);
        Vec x(static_cast<std::size_t>(n), 0.0);
        Vec g(static_cast<std::size_t>(n));
        for (auto& v : g) v = rng.uniform(-1.0, 1.0);
        for (int k = 0; k < pairs; ++k) {
            Vec s(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                s[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
                // y close to s keeps s'y safely positive
                y[static_cast<std::size_t>(i)] =
                    s[static_cast<std::size_t>(i)] + 0.2 * rng.uniform(-1.0, 1.0);
            }
            if (dot(s, y) < 1e-3 * norm2(s) * norm2(y)) continue;
            Vec x_new = add_scaled(x, 1.0, s);
            Vec g_new = add_scaled(g, 1.0, y); // treat y as the gradient change
            e.update_state(x, x_new, g, g_new);
            x = x_new;
            g = g_new;
        }
        if (e.pairs().empty()) continue;
        Vec probe(static_cast<std::size_t>(n));
        for (auto& v : probe) v = rng.uniform(-2.0, 2.0);
        Vec fast = e.propose(probe);
        Vec dense = testsupport::dense_lbfgs_direction(e.pairs(), probe);
        double scale = std::max(1.0, norm_inf(dense));
        CHECK(norm_inf(sub(fast, dense)) / scale <= 1e-12);
        ++checked;
    }
    CHECK(checked >= 80); // the skip branches must stay rare
}

TEST_CASE("lbfgs directions stay descent directions under cautious storage") {
    Rng rng(77);
    EngineConfig cfg;
    cfg.kind = EngineKind::LBFGS;
    DirectionEngine e(cfg);
    Vec x{0.0, 0.0, 0.0};
    Vec g{1.0, -0.5, 0.25};
    for (int k = 0; k < 200; ++k) {
        Vec s(3), y(3);
        for (int i = 0; i < 3; ++i) {
            s[static_cast<std::size_t>(i)] = rng.uniform(-1.0, 1.0);
            y[static_cast<std::size_t>(i)] =
                s[static_cast<std::size_t>(i)] + 0.3 * rng.uniform(-1.0, 1.0);
        }
        e.update_state(x, add_scaled(x, 1.0, s), g, add_scaled(g, 1.0, y));
        Vec probe{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        if (norm2(probe) == 0.0) continue;
        CHECK(dot(probe, e.propose(probe)) < 0.0);
    }
}
