#pragma once

#include <cmath>
#include <stdexcept>

#include "restartls/noise.hpp"
#include "restartls/vec.hpp"

namespace restartls {

struct LineSearchParams {
    double eta = 0.5;   // sufficient-decrease factor, in (0, 1/2]
    double theta = 0.5; // backtracking factor, in (0, 1)
    double eps_f = 0.0; // function noise level, adds 2*eps_f of slack
    int j_max = 50;     // hard cap on backtracks (theta^50 ~ 8.9e-16 for theta = 1/2)
};

inline void validate(const LineSearchParams& p) {
    if (!(p.eta > 0.0 && p.eta <= 0.5)) throw std::invalid_argument("linesearch: eta must be in (0, 1/2]");
    if (!(p.theta > 0.0 && p.theta < 1.0)) throw std::invalid_argument("linesearch: theta must be in (0, 1)");
    if (p.eps_f < 0.0) throw std::invalid_argument("linesearch: eps_f must be >= 0");
    if (p.j_max < 1) throw std::invalid_argument("linesearch: j_max must be >= 1");
}

struct LineSearchResult {
    double alpha = 1.0;     // theta^j
    int j = 0;              // accepted backtrack exponent
    double f_at_x = 0.0;    // the single noisy sample of f at the current point
    double f_at_trial = 0.0;
    int n_trials = 0;       // trial evaluations; total f evals = n_trials + 1
    bool capped = false;    // hit j_max without acceptance; the step is taken anyway
};

/// Noise-relaxed backtracking Armijo search: find the smallest j >= 0 with
///   f(x + theta^j d) < f(x) + eta * theta^j * g'd + 2 eps_f.
/// f(x) is sampled once and cached across all trials of the loop; every trial
/// point gets a fresh sample. Non-finite trial values count as rejections.
inline LineSearchResult backtrack(NoisyOracle& oracle, const Vec& x, const Vec& d,
                                  const Vec& g, const LineSearchParams& params) {
    validate(params);
    LineSearchResult out;
    out.f_at_x = oracle.noisy_f(x);
    const double gd = dot(g, d);
    for (int j = 0;; ++j) {
        double alpha = std::pow(params.theta, j);
        double ft = oracle.noisy_f(add_scaled(x, alpha, d));
        out.j = j;
        out.alpha = alpha;
        out.f_at_trial = ft;
        out.n_trials = j + 1;
        if (std::isfinite(ft) && ft < out.f_at_x + params.eta * alpha * gd + 2.0 * params.eps_f)
            return out;
        if (j == params.j_max) {
            out.capped = true;
            return out;
        }
    }
}

/// Maximum admissible backtrack count when the step-size floor alpha_bar
/// applies: floor([log_theta(alpha_bar)]_+ + 1).
inline int backtrack_bound(double alpha_bar, double theta) {
    if (!(alpha_bar > 0.0)) throw std::invalid_argument("backtrack_bound: alpha_bar must be > 0");
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("backtrack_bound: theta must be in (0, 1)");
    double jbar = std::max(0.0, std::log(alpha_bar) / std::log(theta));
    return static_cast<int>(std::floor(jbar + 1.0));
}

} // namespace restartls
