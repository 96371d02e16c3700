#pragma once

#include <deque>
#include <stdexcept>

#include "restartls/vec.hpp"

namespace restartls {

enum class EngineKind { GD, NLCG_PRP_PLUS, LBFGS };

struct EngineConfig {
    EngineKind kind = EngineKind::GD;
    int memory = 10;        // stored curvature pairs (L-BFGS)
    double eps_sy = 1e-4;   // cautious pair-storage threshold
    bool keep_memory_on_restart = true; // L-BFGS keeps its pairs across restarts by default
    bool force_beta_zero = false;       // debug switch: reduces NLCG to steepest descent
};

/// PRP+ conjugate parameter: max{0, g_new'(g_new - g_old) / ||g_old||^2}.
inline double prp_plus_beta(const Vec& g_new, const Vec& g_old) {
    double den = dot(g_old, g_old);
    if (den == 0.0) return 0.0;
    double num = dot(g_new, sub(g_new, g_old));
    return std::max(0.0, num / den);
}

/// Search-direction engine: steepest descent, PRP+ nonlinear CG, or L-BFGS
/// with the two-loop recursion and cautious pair storage.
///
/// Per-iteration protocol, driven by the solver:
///   1. update_state(x_old, x_new, g_old, g_new)  (curvature bookkeeping)
///   2. d = propose(g_new)
///   3. on restart: reset_on_restart(); otherwise commit_direction(d, g_new)
class DirectionEngine {
public:
    struct Pair {
        Vec s, y;
        double sy = 0.0;
        double yy = 0.0;
    };

    explicit DirectionEngine(EngineConfig cfg = {}) : cfg_(cfg) {
        if (cfg_.memory < 1) throw std::invalid_argument("directions: memory must be >= 1");
        if (cfg_.eps_sy <= 0.0) throw std::invalid_argument("directions: eps_sy must be > 0");
    }

    Vec propose(const Vec& g_new) const {
        switch (cfg_.kind) {
            case EngineKind::GD:
                return negated(g_new);
            case EngineKind::NLCG_PRP_PLUS: {
                if (!has_prev_ || cfg_.force_beta_zero) return negated(g_new);
                double beta = prp_plus_beta(g_new, g_prev_);
                if (beta == 0.0) return negated(g_new);
                Vec d = negated(g_new);
                axpy_inplace(d, beta, d_prev_);
                return d;
            }
            case EngineKind::LBFGS:
                return two_loop(g_new);
        }
        return negated(g_new);
    }

    /// L-BFGS curvature bookkeeping: append (s, y) = (x_new - x_old, g_new - g_old)
    /// when s'y >= eps_sy ||s|| ||y||, evicting the oldest pair beyond the memory
    /// limit. A skipped pair leaves the stored memory unchanged.
    void update_state(const Vec& x_old, const Vec& x_new, const Vec& g_old, const Vec& g_new) {
        if (cfg_.kind != EngineKind::LBFGS) return;
        Vec s = sub(x_new, x_old);
        Vec y = sub(g_new, g_old);
        double ns = norm2(s), ny = norm2(y);
        if (ns == 0.0 || ny == 0.0) return;
        double sy = dot(s, y);
        if (sy < cfg_.eps_sy * ns * ny) return;
        double yy = dot(y, y);
        pairs_.push_back(Pair{std::move(s), std::move(y), sy, yy});
        if (static_cast<int>(pairs_.size()) > cfg_.memory) pairs_.pop_front();
    }

    /// Record the direction actually taken and the gradient it was built from,
    /// so the next NLCG proposal can form its conjugate step.
    void commit_direction(const Vec& d_taken, const Vec& g_new) {
        if (cfg_.kind != EngineKind::NLCG_PRP_PLUS) return;
        d_prev_ = d_taken;
        g_prev_ = g_new;
        has_prev_ = true;
    }

    /// NLCG drops its previous-direction state, so the next proposal is the
    /// plain steepest-descent direction. L-BFGS keeps or flushes its pairs
    /// according to the config flag. GD is stateless.
    void reset_on_restart() {
        if (cfg_.kind == EngineKind::NLCG_PRP_PLUS) has_prev_ = false;
        if (cfg_.kind == EngineKind::LBFGS && !cfg_.keep_memory_on_restart) pairs_.clear();
    }

    const std::deque<Pair>& pairs() const { return pairs_; }
    const EngineConfig& config() const { return cfg_; }

private:
    // Two-loop recursion with initial scaling gamma = s'y / y'y from the most
    // recent pair; identity scaling when the memory is empty.
    Vec two_loop(const Vec& g) const {
        if (pairs_.empty()) return negated(g);
        std::size_t m = pairs_.size();
        std::vector<double> a(m);
        Vec q = g;
        for (std::size_t i = m; i-- > 0;) {
            const Pair& pr = pairs_[i];
            a[i] = dot(pr.s, q) / pr.sy;
            axpy_inplace(q, -a[i], pr.y);
        }
        const Pair& last = pairs_.back();
        double gamma = last.sy / last.yy;
        Vec r = scaled(q, gamma);
        for (std::size_t i = 0; i < m; ++i) {
            const Pair& pr = pairs_[i];
            double b = dot(pr.y, r) / pr.sy;
            axpy_inplace(r, a[i] - b, pr.s);
        }
        return negated(r);
    }

    EngineConfig cfg_;
    bool has_prev_ = false;
    Vec d_prev_, g_prev_;
    std::deque<Pair> pairs_;
};

} // namespace restartls
