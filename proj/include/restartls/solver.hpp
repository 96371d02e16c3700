#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "restartls/directions.hpp"
#include "restartls/linesearch.hpp"
#include "restartls/noise.hpp"
#include "restartls/problem.hpp"

namespace restartls {

struct SolverConfig {
    double eta = 0.5;
    double theta = 0.5;
    double sigma_d = 1.0;  // descent threshold in the restart predicate, [0, 1]
    double kappa_d = 1.0;  // direction-length threshold, >= 1 or +inf (disables the clause)
    double p = 1.0;
    double eps_f = 0.0;
    double eps_g = 0.0;
    int max_iter = 1000;
    int j_max = 50;
    EngineConfig engine{};
    double grad_tol_floor = 1e-8;
    // Adaptive gradient-accuracy mode, used by the theory verification runs.
    bool enforce_adaptive_accuracy = false;
    double sigma_phi = 0.0;
    double alpha_bar_p = 1.0;
};

inline void validate(const SolverConfig& c) {
    if (!(c.eta > 0.0 && c.eta <= 0.5)) throw std::invalid_argument("solver: eta must be in (0, 1/2]");
    if (!(c.theta > 0.0 && c.theta < 1.0)) throw std::invalid_argument("solver: theta must be in (0, 1)");
    if (!(c.sigma_d >= 0.0 && c.sigma_d <= 1.0)) throw std::invalid_argument("solver: sigma_d must be in [0, 1]");
    if (!(c.kappa_d >= 1.0)) throw std::invalid_argument("solver: kappa_d must be >= 1 (or +inf)");
    if (c.p < 0.0) throw std::invalid_argument("solver: p must be >= 0");
    if (c.eps_f < 0.0 || c.eps_g < 0.0) throw std::invalid_argument("solver: noise levels must be >= 0");
    if (c.max_iter < 0 || c.j_max < 1) throw std::invalid_argument("solver: bad iteration caps");
}

enum class RunStatus { Converged, MaxIter, SpuriousInitialStop };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Converged: return "converged";
        case RunStatus::MaxIter: return "max_iter";
        case RunStatus::SpuriousInitialStop: return "spurious_initial_stop";
    }
    return "unknown";
}

inline std::optional<RunStatus> run_status_from_string(const std::string& s) {
    if (s == "converged") return RunStatus::Converged;
    if (s == "max_iter") return RunStatus::MaxIter;
    if (s == "spurious_initial_stop") return RunStatus::SpuriousInitialStop;
    return std::nullopt;
}

struct IterationRecord {
    long long k = 0;
    double alpha = 0.0;
    int j = 0;
    bool restarted = false;  // the restart predicate fired when defining d_{k+1}
    bool steepest = false;   // d_k equals -g_k exactly (restarted-iteration index set)
    bool capped_ls = false;
    double g_norm_inf = 0.0;
    double g_norm2 = 0.0;
    double true_grad_norm_inf = 0.0;
    double true_grad_norm2 = 0.0;
    double f_true = 0.0;  // noiseless objective at x_k (measurement, not counted)
    double g_dot_d = 0.0;
    double d_norm = 0.0;  // Euclidean norm of d_k
    long long f_evals_so_far = 0;
    long long g_evals_so_far = 0;
};

struct RunMeta {
    std::string problem;
    std::string method;
    int dim = 0;
    double scale = 1.0;
    std::optional<double> lipschitz_L; // of the scaled problem
    std::optional<double> f_low;       // of the scaled problem
    std::uint64_t seed = 0;
    SolverConfig cfg{};
};

struct RunResult {
    RunStatus status = RunStatus::MaxIter;
    long long iterations = 0;
    std::vector<IterationRecord> trace;
    double restart_fraction = 0.0;
    Vec final_x;
    bool solved = false;              // some iterate passed the true-gradient success test
    long long first_success_iter = -1;
    long long n_f_evals = 0;
    long long n_g_evals = 0;
    double f0_true = 0.0;
    double final_f_true = 0.0;
    double final_g_norm_inf = 0.0;
    double final_true_grad_norm_inf = 0.0;
    double final_true_grad_norm2 = 0.0;
    bool non_finite_abort = false;
    RunMeta meta;
};

/// Restart predicate on a proposed direction:
///   g'd >= -sigma_d ||g||^(1+p)   or   ||d|| >= kappa_d ||g||^((1+p)/2),
/// with non-strict inequalities. kappa_d = +inf disables the length clause;
/// sigma_d = 0 turns the first clause into "not a descent direction".
inline bool restart_check(const Vec& g, const Vec& d, double sigma_d, double kappa_d, double p) {
    double ng = norm2(g);
    if (dot(g, d) >= -sigma_d * std::pow(ng, 1.0 + p)) return true;
    if (std::isinf(kappa_d)) return false;
    return norm2(d) >= kappa_d * std::pow(ng, (1.0 + p) / 2.0);
}

/// Success test on the true gradient:
///   ||grad f(x)||_inf <= eps_g + max{2 eps_g, floor}.
/// Reduces to the plain ||grad f(x)||_inf <= floor test when eps_g = 0.
inline bool success_test(double true_grad_inf_norm, double eps_g, double floor) {
    return true_grad_inf_norm <= eps_g + std::max(2.0 * eps_g, floor);
}

/// Run the restarted line-search loop on a scaled problem:
/// d_0 = -g_0, then per iteration a backtracking search along d_k, a fresh
/// gradient estimate at the new point, a proposed direction, and the restart
/// predicate forcing d_{k+1} = -g_{k+1} when it fires.
///
/// Terminates when ||g_k||_inf <= max{2 eps_g, grad_tol_floor} or after
/// max_iter iterations. A noisy run that terminates at the very first iterate
/// is flagged SpuriousInitialStop; benchmark statistics discard such runs.
/// True function/gradient values are recorded at every iterate for
/// verification; they are bookkept outside the oracle counters.
inline RunResult run(const ScaledProblem& prob, const SolverConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    if (static_cast<int>(prob.x0().size()) != prob.dim())
        throw std::invalid_argument("solver: x0 does not match the problem dimension");

    NoiseConfig nc;
    nc.eps_f = cfg.eps_f;
    nc.eps_g = cfg.eps_g;
    nc.seed = seed;
    nc.enforce_adaptive_accuracy = cfg.enforce_adaptive_accuracy;
    nc.sigma_phi = cfg.sigma_phi;
    nc.alpha_bar_p = cfg.alpha_bar_p;
    nc.p = cfg.p;
    NoisyOracle oracle(prob, nc);
    DirectionEngine engine(cfg.engine);
    LineSearchParams ls{cfg.eta, cfg.theta, cfg.eps_f, cfg.j_max};

    const double term_tol = std::max(2.0 * cfg.eps_g, cfg.grad_tol_floor);

    RunResult rr;
    rr.meta.problem = prob.name();
    rr.meta.dim = prob.dim();
    rr.meta.scale = prob.scale;
    rr.meta.lipschitz_L = prob.lipschitz_L();
    rr.meta.f_low = prob.f_low();
    rr.meta.seed = seed;
    rr.meta.cfg = cfg;

    Vec x = prob.x0();
    Vec g = oracle.noisy_grad(x);
    Vec d = negated(g);
    rr.f0_true = prob.f(x);

    long long restarts = 0;
    for (long long k = 0;; ++k) {
        Vec tg = prob.grad(x);
        double tg_inf = norm_inf(tg);
        double tg_2 = norm2(tg);
        double g_inf = norm_inf(g);
        double f_true = prob.f(x);

        if (rr.first_success_iter < 0 && success_test(tg_inf, cfg.eps_g, cfg.grad_tol_floor)) {
            rr.first_success_iter = k;
            rr.solved = true;
        }

        bool terminate = g_inf <= term_tol;
        if (terminate || k >= cfg.max_iter) {
            if (terminate)
                rr.status = (k == 0 && cfg.eps_g > 0.0) ? RunStatus::SpuriousInitialStop
                                                        : RunStatus::Converged;
            else
                rr.status = RunStatus::MaxIter;
            rr.final_x = x;
            rr.final_f_true = f_true;
            rr.final_g_norm_inf = g_inf;
            rr.final_true_grad_norm_inf = tg_inf;
            rr.final_true_grad_norm2 = tg_2;
            break;
        }

        LineSearchResult lsr = backtrack(oracle, x, d, g, ls);
        Vec x_new = add_scaled(x, lsr.alpha, d);

        IterationRecord rec;
        rec.k = k;
        rec.alpha = lsr.alpha;
        rec.j = lsr.j;
        rec.capped_ls = lsr.capped;
        rec.g_norm_inf = g_inf;
        rec.g_norm2 = norm2(g);
        rec.true_grad_norm_inf = tg_inf;
        rec.true_grad_norm2 = tg_2;
        rec.f_true = f_true;
        rec.g_dot_d = dot(g, d);
        rec.d_norm = norm2(d);
        rec.steepest = same_vector(d, negated(g));

        bool abort = !all_finite(x_new);
        Vec g_new;
        if (!abort) {
            g_new = oracle.noisy_grad(x_new);
            abort = !all_finite(g_new);
        }
        if (abort) {
            rec.f_evals_so_far = oracle.n_f_evals();
            rec.g_evals_so_far = oracle.n_g_evals();
            rr.trace.push_back(rec);
            rr.status = RunStatus::MaxIter;
            rr.non_finite_abort = true;
            rr.final_x = x;
            rr.final_f_true = f_true;
            rr.final_g_norm_inf = g_inf;
            rr.final_true_grad_norm_inf = tg_inf;
            rr.final_true_grad_norm2 = tg_2;
            break;
        }

        engine.update_state(x, x_new, g, g_new);
        Vec d_new = engine.propose(g_new);
        bool restarted = restart_check(g_new, d_new, cfg.sigma_d, cfg.kappa_d, cfg.p);
        if (restarted) {
            d_new = negated(g_new);
            engine.reset_on_restart();
            ++restarts;
        } else {
            engine.commit_direction(d_new, g_new);
        }
        rec.restarted = restarted;
        rec.f_evals_so_far = oracle.n_f_evals();
        rec.g_evals_so_far = oracle.n_g_evals();
        rr.trace.push_back(rec);

        x = std::move(x_new);
        g = std::move(g_new);
        d = std::move(d_new);
    }

    rr.iterations = static_cast<long long>(rr.trace.size());
    rr.n_f_evals = oracle.n_f_evals();
    rr.n_g_evals = oracle.n_g_evals();
    rr.restart_fraction = rr.iterations > 0 ? static_cast<double>(restarts) / rr.iterations : 0.0;
    return rr;
}

/// Gradient estimates consumed up to and including the first successful
/// iterate; the profile cost unit. Unsolved runs have no cost.
inline std::optional<double> run_cost(const RunResult& rr) {
    if (!rr.solved || rr.first_success_iter < 0) return std::nullopt;
    return static_cast<double>(rr.first_success_iter + 1);
}

} // namespace restartls
