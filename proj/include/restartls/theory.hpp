#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "restartls/linesearch.hpp"
#include "restartls/solver.hpp"

namespace restartls::theory {

/// Everything the closed-form complexity constants depend on. L, f0 and f_low
/// refer to the scaled problem the run was executed on.
struct TheoryParams {
    double eta = 0.5;
    double theta = 0.5;
    double sigma_d = 1.0;
    double kappa_d = 1.0;
    double p = 1.0;
    double sigma_phi = 0.0;
    double L = 1.0;
    double eps_1st = 0.0;
    double eps_f = 0.0;
    double f0 = 0.0;
    double f_low = 0.0;
};

/// Step-size floor constant
///   alpha_bar = 2 (1-eta) sigma_d (1-sigma_phi)^(1+p)
///             / (2 kappa_d (1+sigma_phi)^((1+p)/2) + L kappa_d^2 (1+sigma_phi)^(1+p)),
/// evaluated at the given exponent p. Always in [0, 1) for kappa_d >= 1, L > 0;
/// zero when sigma_d = 0 or kappa_d = +inf.
inline double alpha_bar(const TheoryParams& tp, double use_p) {
    double op = 1.0 + use_p;
    double num = 2.0 * (1.0 - tp.eta) * tp.sigma_d * std::pow(1.0 - tp.sigma_phi, op);
    double den = 2.0 * tp.kappa_d * std::pow(1.0 + tp.sigma_phi, op / 2.0) +
                 tp.L * tp.kappa_d * tp.kappa_d * std::pow(1.0 + tp.sigma_phi, op);
    return num / den;
}

inline double alpha_bar_p(const TheoryParams& tp) { return alpha_bar(tp, tp.p); }

/// The restarted-iteration floor: same formula at sigma_d = kappa_d = 1, p = 1,
/// with sigma_phi retained.
inline double alpha_bar_1(const TheoryParams& tp) {
    TheoryParams q = tp;
    q.sigma_d = 1.0;
    q.kappa_d = 1.0;
    return alpha_bar(q, 1.0);
}

struct DecreaseConstants {
    // c_N = eta sigma_d (1-sigma_phi)^(1+p) / sigma_phi^p * min{1, theta alpha_bar_p}.
    // Undefined at sigma_phi = 0 with p > 0 (the gating condition is vacuous there).
    std::optional<double> c_N;
    // c_R = eta * min{1, theta alpha_bar_1}.
    double c_R = 0.0;
};

inline DecreaseConstants decrease_constants(const TheoryParams& tp) {
    DecreaseConstants out;
    double ab1 = alpha_bar_1(tp);
    out.c_R = tp.eta * std::min(1.0, tp.theta * ab1);
    if (tp.sigma_phi == 0.0 && tp.p > 0.0) return out;
    double abp = alpha_bar_p(tp);
    out.c_N = tp.eta * tp.sigma_d * std::pow(1.0 - tp.sigma_phi, 1.0 + tp.p) /
              std::pow(tp.sigma_phi, tp.p) * std::min(1.0, tp.theta * abp);
    return out;
}

struct Budget {
    bool bounded = false;     // false when eps_1st = 0 or a decrease constant degenerates
    double K_eps = 0.0;       // iteration (and gradient estimate) budget, ceil applied
    double eval_bound = 0.0;  // function evaluation budget, ceil applied once
    double eps = 0.0;         // stationarity level the budget certifies
    bool noise_gate_ok = false; // eps_f <= min{(c_N/8) eps^(1+p), (c_R/8) eps^2}
};

/// Iteration and evaluation budgets:
///   K_eps      = ceil( 2(f0 - f_low)/c_R * eps^-2 + 2(f0 - f_low)/c_N * eps^-(1+p) )
///   eval_bound = ceil( ([log_theta(min{alpha_bar_p, alpha_bar_1})]_+ + 1) * K_eps )
///   eps        = max{ t_p, t_p^(2/(1+p)), t_1 } with t_q = eps_1st / (sigma_phi alpha_bar_q).
inline Budget iteration_budget(const TheoryParams& tp) {
    Budget b;
    double abp = alpha_bar_p(tp);
    double ab1 = alpha_bar_1(tp);
    DecreaseConstants dc = decrease_constants(tp);

    if (tp.eps_1st == 0.0) {
        b.eps = 0.0;
        b.noise_gate_ok = tp.eps_f == 0.0;
        return b; // budgets unbounded in the noiseless limit
    }

    const double inf = std::numeric_limits<double>::infinity();
    double tp_term = tp.sigma_phi * abp > 0.0 ? tp.eps_1st / (tp.sigma_phi * abp) : inf;
    double t1_term = tp.sigma_phi * ab1 > 0.0 ? tp.eps_1st / (tp.sigma_phi * ab1) : inf;
    b.eps = std::max({tp_term, std::pow(tp_term, 2.0 / (1.0 + tp.p)), t1_term});

    if (dc.c_N && *dc.c_N > 0.0 && dc.c_R > 0.0) {
        b.noise_gate_ok =
            tp.eps_f <= std::min(*dc.c_N / 8.0 * std::pow(tp.eps_1st, 1.0 + tp.p),
                                 dc.c_R / 8.0 * tp.eps_1st * tp.eps_1st);
        double gap = tp.f0 - tp.f_low;
        double k = 2.0 * gap / dc.c_R / (tp.eps_1st * tp.eps_1st) +
                   2.0 * gap / *dc.c_N / std::pow(tp.eps_1st, 1.0 + tp.p);
        if (std::isfinite(k)) {
            b.bounded = true;
            b.K_eps = std::ceil(k);
            double minab = std::min(abp, ab1);
            double per_iter = std::max(0.0, std::log(minab) / std::log(tp.theta)) + 1.0;
            b.eval_bound = std::ceil(per_iter * b.K_eps);
        }
    }
    return b;
}

struct TheoryConstants {
    double alpha_bar_p = 0.0;
    double alpha_bar_1 = 0.0;
    std::optional<double> c_N;
    double c_R = 0.0;
    std::optional<int> j_bar_N; // backtrack cap for non-restarted iterations, when defined
    int j_bar_R = 0;
    Budget budget;
};

inline TheoryConstants constants(const TheoryParams& tp) {
    TheoryConstants tc;
    tc.alpha_bar_p = alpha_bar_p(tp);
    tc.alpha_bar_1 = alpha_bar_1(tp);
    DecreaseConstants dc = decrease_constants(tp);
    tc.c_N = dc.c_N;
    tc.c_R = dc.c_R;
    if (tc.alpha_bar_p > 0.0) tc.j_bar_N = backtrack_bound(tc.alpha_bar_p, tp.theta);
    tc.j_bar_R = backtrack_bound(tc.alpha_bar_1, tp.theta);
    tc.budget = iteration_budget(tp);
    return tc;
}

struct VerificationReport {
    bool verifiable = true;
    std::string reason;
    TheoryConstants constants{};
    long long gated_restarted = 0;
    long long gated_nonrestarted = 0;
    std::vector<long long> backtrack_violations;
    std::vector<long long> decrease_violations;
    bool budget_applicable = false;
    bool budget_ok = true;
    long long first_eps_iter = -1;
    long long f_evals_to_eps = 0;

    bool pass() const {
        return verifiable && backtrack_violations.empty() && decrease_violations.empty() &&
               budget_ok;
    }
};

namespace detail {

// Noiseless limit: a zero threshold gates every non-stationary iterate.
inline double gate_threshold(double eps_1st, double denom) {
    if (eps_1st == 0.0) return 0.0;
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return eps_1st / denom;
}

} // namespace detail

/// Check a recorded trace against the per-iteration guarantees and, when the
/// noise gate holds, the global budget:
///  (a) on gated iterations, the backtrack count respects the cap for the
///      matching alpha_bar (restarted iterations use alpha_bar_1);
///  (b) on gated iterations, the true decrease exceeds c_N eps^(1+p) - 4 eps_f
///      (non-restarted) or c_R eps^2 - 4 eps_f (restarted); in the noiseless
///      limit the bound reduces to strict decrease;
///  (c) the first iterate with true gradient norm <= eps arrives within K_eps
///      iterations and within the function-evaluation budget.
/// Iterations failing the gate are skipped, not failed.
inline VerificationReport verify_trace(const RunResult& rr, const TheoryParams& tp) {
    VerificationReport rep;
    rep.constants = constants(tp);
    const double abp = rep.constants.alpha_bar_p;
    const double ab1 = rep.constants.alpha_bar_1;
    const double thr_r = detail::gate_threshold(tp.eps_1st, tp.sigma_phi * ab1);
    const double thr_n = detail::gate_threshold(tp.eps_1st, tp.sigma_phi * abp);
    const double op = 1.0 + tp.p;

    const std::size_t n_rec = rr.trace.size();
    for (std::size_t k = 0; k < n_rec; ++k) {
        const IterationRecord& rec = rr.trace[k];
        bool in_r = rec.steepest;
        double nt = rec.true_grad_norm2;
        bool gated;
        if (in_r) {
            gated = nt > 0.0 && nt >= thr_r;
        } else {
            double mn = std::min(nt, std::pow(nt, op / 2.0));
            gated = nt > 0.0 && mn >= thr_n;
        }
        if (!gated) continue;
        (in_r ? rep.gated_restarted : rep.gated_nonrestarted)++;

        // (a) backtrack cap
        if (in_r) {
            if (rec.j > rep.constants.j_bar_R) rep.backtrack_violations.push_back(rec.k);
        } else if (rep.constants.j_bar_N) {
            if (rec.j > *rep.constants.j_bar_N) rep.backtrack_violations.push_back(rec.k);
        }

        // (b) decrease guarantee; the last record of an aborted run has no successor
        bool last = k + 1 == n_rec;
        if (last && rr.non_finite_abort) continue;
        double f_next = last ? rr.final_f_true : rr.trace[k + 1].f_true;
        double dec = rec.f_true - f_next;
        if (tp.eps_1st == 0.0) {
            if (!(dec > 0.0)) rep.decrease_violations.push_back(rec.k);
        } else if (in_r) {
            if (!(dec > rep.constants.c_R * tp.eps_1st * tp.eps_1st - 4.0 * tp.eps_f))
                rep.decrease_violations.push_back(rec.k);
        } else if (rep.constants.c_N) {
            if (!(dec > *rep.constants.c_N * std::pow(tp.eps_1st, op) - 4.0 * tp.eps_f))
                rep.decrease_violations.push_back(rec.k);
        }
    }

    // (c) iteration and evaluation budget
    const Budget& b = rep.constants.budget;
    if (b.bounded && b.noise_gate_ok) {
        rep.budget_applicable = true;
        long long first = -1;
        for (std::size_t k = 0; k < n_rec; ++k) {
            if (rr.trace[k].true_grad_norm2 <= b.eps) {
                first = rr.trace[k].k;
                break;
            }
        }
        if (first < 0 && !rr.non_finite_abort && rr.final_true_grad_norm2 <= b.eps)
            first = rr.iterations;
        rep.first_eps_iter = first;
        if (first >= 0) {
            rep.f_evals_to_eps = first == 0 ? 0 : rr.trace[static_cast<std::size_t>(first) - 1].f_evals_so_far;
            rep.budget_ok = static_cast<double>(first) <= b.K_eps &&
                            static_cast<double>(rep.f_evals_to_eps) <= b.eval_bound;
        } else {
            // The run stopped before certifying eps-stationarity; only a run
            // that exhausted the budget without reaching it is a violation.
            rep.budget_ok = static_cast<double>(rr.iterations) < b.K_eps;
        }
    }
    return rep;
}

/// Build TheoryParams from a recorded run. Runs on problems without a known
/// Lipschitz constant or lower bound are not verifiable.
inline std::optional<TheoryParams> params_from_run(const RunResult& rr) {
    if (!rr.meta.lipschitz_L || !rr.meta.f_low) return std::nullopt;
    TheoryParams tp;
    tp.eta = rr.meta.cfg.eta;
    tp.theta = rr.meta.cfg.theta;
    tp.sigma_d = rr.meta.cfg.sigma_d;
    tp.kappa_d = rr.meta.cfg.kappa_d;
    tp.p = rr.meta.cfg.p;
    tp.sigma_phi = rr.meta.cfg.sigma_phi;
    tp.L = *rr.meta.lipschitz_L;
    tp.eps_1st = rr.meta.cfg.eps_g;
    tp.eps_f = rr.meta.cfg.eps_f;
    tp.f0 = rr.f0_true;
    tp.f_low = *rr.meta.f_low;
    return tp;
}

inline VerificationReport verify_trace(const RunResult& rr) {
    auto tp = params_from_run(rr);
    if (!tp) {
        VerificationReport rep;
        rep.verifiable = false;
        rep.reason = "problem has no known Lipschitz constant or lower bound";
        return rep;
    }
    return verify_trace(rr, *tp);
}

} // namespace restartls::theory
