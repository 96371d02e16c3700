#pragma once

// Test-only oracles, independent of the library implementation paths they check.

#include <functional>

#include "restartls/directions.hpp"
#include "restartls/rng.hpp"
#include "restartls/vec.hpp"

namespace testsupport {

using restartls::Vec;

/// Central finite differences with per-coordinate step h = 1e-6 * max{1, |x_i|}.
inline Vec central_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x) {
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

/// Relative gradient error in the sup norm, floored at magnitude one.
inline double grad_rel_err(const Vec& analytic, const Vec& fd) {
    return restartls::norm_inf(restartls::sub(analytic, fd)) /
           std::max(1.0, restartls::norm_inf(analytic));
}

/// Seeded point near x0 for gradient spot checks.
inline Vec perturbed_point(const Vec& x0, restartls::Rng& rng, double radius = 0.5) {
    Vec x = x0;
    for (double& v : x) v += rng.uniform(-radius, radius);
    return x;
}

using DenseMatrix = std::vector<Vec>;

inline DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline Vec matvec(const DenseMatrix& m, const Vec& x) {
    Vec r(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) r[i] += m[i][j] * x[j];
    return r;
}

/// Dense BFGS inverse-Hessian recursion, the brute-force mirror of the
/// two-loop recursion: start from gamma * I (gamma from the newest pair) and
/// apply H <- (I - rho s y') H (I - rho y s') + rho s s' oldest to newest.
inline Vec dense_lbfgs_direction(const std::deque<restartls::DirectionEngine::Pair>& pairs,
                                 const Vec& g) {
    std::size_t n = g.size();
    if (pairs.empty()) return restartls::negated(g);
    double gamma = pairs.back().sy / pairs.back().yy;
    DenseMatrix h = identity(n);
    for (auto& row : h)
        for (double& v : row) v *= gamma;
    for (const auto& pr : pairs) {
        double rho = 1.0 / pr.sy;
        DenseMatrix a = identity(n), b = identity(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= rho * pr.s[i] * pr.y[j];
                b[i][j] -= rho * pr.y[i] * pr.s[j];
            }
        DenseMatrix ah(n, Vec(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j) ah[i][j] += a[i][k] * h[k][j];
        DenseMatrix hn(n, Vec(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j) hn[i][j] += ah[i][k] * b[k][j];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) hn[i][j] += rho * pr.s[i] * pr.s[j];
        h = std::move(hn);
    }
    return restartls::negated(matvec(h, g));
}

} // namespace testsupport
