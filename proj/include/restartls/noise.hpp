#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "restartls/problem.hpp"
#include "restartls/rng.hpp"
#include "restartls/vec.hpp"

namespace restartls {

struct NoiseConfig {
    double eps_f = 0.0; // bound on function estimate error
    double eps_g = 0.0; // bound on gradient estimate error (Euclidean)
    std::uint64_t seed = 0;
    // Adaptive gradient accuracy mode: the error radius becomes
    // max{eps_g, sigma_phi * alpha_bar_p * min[||grad||, ||grad||^((1+p)/2)]}.
    // Used by the theory verification runs; benchmark runs keep the plain ball.
    bool enforce_adaptive_accuracy = false;
    double sigma_phi = 0.0;    // in [0, 1)
    double alpha_bar_p = 1.0;  // step-size floor constant, in (0, 1]
    double p = 1.0;
};

inline void validate(const NoiseConfig& c) {
    if (c.eps_f < 0.0 || c.eps_g < 0.0) throw std::invalid_argument("noise: eps_f/eps_g must be >= 0");
    if (c.sigma_phi < 0.0 || c.sigma_phi >= 1.0) throw std::invalid_argument("noise: sigma_phi must be in [0,1)");
    if (c.p < 0.0) throw std::invalid_argument("noise: p must be >= 0");
}

/// Seeded noisy view of a scaled problem, with evaluation counters.
/// Every call draws fresh noise, including repeated calls at the same point.
class NoisyOracle {
public:
    NoisyOracle(ScaledProblem prob, NoiseConfig cfg)
        : prob_(std::move(prob)), cfg_(cfg), rng_(cfg.seed) {
        validate(cfg_);
    }

    /// f(x) + u with u uniform on [-eps_f, eps_f].
    double noisy_f(const Vec& x) {
        double v = prob_.f(x);
        if (cfg_.eps_f > 0.0) v += rng_.uniform(-cfg_.eps_f, cfg_.eps_f);
        ++n_f_;
        return v;
    }

    /// grad f(x) + e with e uniform in the Euclidean ball of the configured radius.
    Vec noisy_grad(const Vec& x) {
        Vec g = prob_.grad(x);
        double r = cfg_.eps_g;
        if (cfg_.enforce_adaptive_accuracy) {
            double nt = norm2(g);
            double cap = std::min(nt, std::pow(nt, (1.0 + cfg_.p) / 2.0));
            r = std::max(cfg_.eps_g, cfg_.sigma_phi * cfg_.alpha_bar_p * cap);
        }
        if (r > 0.0) {
            Vec e = rng_.ball(g.size(), r);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += e[i];
        }
        ++n_g_;
        return g;
    }

    long long n_f_evals() const { return n_f_; }
    long long n_g_evals() const { return n_g_; }
    const ScaledProblem& problem() const { return prob_; }
    const NoiseConfig& config() const { return cfg_; }

private:
    ScaledProblem prob_;
    NoiseConfig cfg_;
    Rng rng_;
    long long n_f_ = 0;
    long long n_g_ = 0;
};

/// Relative norm bounds implied by the adaptive accuracy condition:
/// (1 - sigma_phi) ||grad|| <= ||g|| <= (1 + sigma_phi) ||grad||.
inline bool sanity_bounds(const Vec& g, const Vec& true_grad, double sigma_phi) {
    double ng = norm2(g);
    double nt = norm2(true_grad);
    return (1.0 - sigma_phi) * nt <= ng && ng <= (1.0 + sigma_phi) * nt;
}

} // namespace restartls
