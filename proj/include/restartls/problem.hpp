#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "restartls/vec.hpp"

namespace restartls {

/// An unconstrained minimization problem with an analytic gradient.
/// Evaluations are deterministic; noise is layered on top by NoisyOracle.
struct Problem {
    std::string name;
    int dim = 0;
    std::function<double(const Vec&)> eval_f;
    std::function<Vec(const Vec&)> eval_grad;
    Vec x0;
    std::optional<double> lipschitz_L; // gradient Lipschitz constant, when known
    std::optional<double> f_low;       // global lower bound on f, when known
};

/// A problem divided by max{1, ||grad f(x0)||_inf}. Both the objective and the
/// gradient are divided by the same factor, so stationary points are preserved.
struct ScaledProblem {
    Problem base;
    double scale = 1.0;

    const std::string& name() const { return base.name; }
    int dim() const { return base.dim; }
    const Vec& x0() const { return base.x0; }

    double f(const Vec& x) const { return base.eval_f(x) / scale; }

    Vec grad(const Vec& x) const {
        Vec g = base.eval_grad(x);
        for (double& v : g) v /= scale;
        return g;
    }

    std::optional<double> lipschitz_L() const {
        if (!base.lipschitz_L) return std::nullopt;
        return *base.lipschitz_L / scale;
    }

    std::optional<double> f_low() const {
        if (!base.f_low) return std::nullopt;
        return *base.f_low / scale;
    }

    /// Fold the scaling into a plain Problem (used to test idempotence).
    Problem to_problem() const {
        Problem p;
        p.name = base.name;
        p.dim = base.dim;
        p.x0 = base.x0;
        p.lipschitz_L = lipschitz_L();
        p.f_low = f_low();
        p.eval_f = [b = base, s = scale](const Vec& x) { return b.eval_f(x) / s; };
        p.eval_grad = [b = base, s = scale](const Vec& x) {
            Vec g = b.eval_grad(x);
            for (double& v : g) v /= s;
            return g;
        };
        return p;
    }
};

/// scale factor = max{1, ||grad f(x0)||_inf}. Rejects problems whose gradient
/// at x0 is not finite.
inline ScaledProblem scale(const Problem& p) {
    Vec g0 = p.eval_grad(p.x0);
    if (!all_finite(g0))
        throw std::invalid_argument("scale: gradient at x0 is not finite for problem " + p.name);
    return ScaledProblem{p, std::max(1.0, norm_inf(g0))};
}

} // namespace restartls
