#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "restartls/profiles.hpp"
#include "restartls/rng.hpp"
#include "restartls/solver.hpp"
#include "restartls/testbed.hpp"
#include "restartls/theory.hpp"

namespace restartls::bench {

/// One solver configuration of the comparison, with a stable label.
struct MethodSpec {
    std::string label;
    EngineKind kind = EngineKind::GD;
    double sigma_d = 1.0;
    double kappa_d = 1.0;
    double p = 1.0;
    int memory = 10;
    double eps_sy = 1e-4;
    bool keep_memory_on_restart = true;
};

inline MethodSpec gd_method() { return {"gd", EngineKind::GD, 1.0, 1.0, 1.0}; }

inline MethodSpec nlcg_method() {
    return {"nlcg", EngineKind::NLCG_PRP_PLUS, 0.0, std::numeric_limits<double>::infinity(), 1.0};
}

inline MethodSpec lbfgs_method() {
    return {"lbfgs", EngineKind::LBFGS, 0.0, std::numeric_limits<double>::infinity(), 1.0};
}

inline std::string grid_label(const std::string& base, double p, double kappa) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_p%g_k%g", base.c_str(), p, kappa);
    return buf;
}

/// Restarted variants use sigma_d = 1/kappa_d.
inline MethodSpec nlcgr_method(double p = 0.75, double kappa = 1e6, bool labeled_grid = false) {
    MethodSpec m{"nlcgr", EngineKind::NLCG_PRP_PLUS, 1.0 / kappa, kappa, p};
    if (labeled_grid) m.label = grid_label("nlcgr", p, kappa);
    return m;
}

inline MethodSpec lbfgsr_method(double p = 0.75, double kappa = 1e6, bool labeled_grid = false) {
    MethodSpec m{"lbfgsr", EngineKind::LBFGS, 1.0 / kappa, kappa, p};
    if (labeled_grid) m.label = grid_label("lbfgsr", p, kappa);
    return m;
}

/// The five standard methods of the comparison.
inline std::vector<MethodSpec> default_methods(double p = 0.75, double kappa = 1e6) {
    return {gd_method(), nlcg_method(), lbfgs_method(), nlcgr_method(p, kappa),
            lbfgsr_method(p, kappa)};
}

inline MethodSpec parse_method(const std::string& name, double p = 0.75, double kappa = 1e6) {
    if (name == "gd") return gd_method();
    if (name == "nlcg") return nlcg_method();
    if (name == "lbfgs") return lbfgs_method();
    if (name == "nlcgr") return nlcgr_method(p, kappa);
    if (name == "lbfgsr") return lbfgsr_method(p, kappa);
    throw std::invalid_argument("unknown method: " + name);
}

struct ExperimentPlan {
    std::vector<std::string> problems;
    std::vector<MethodSpec> methods;
    std::vector<double> noise_levels; // eps_f values; eps_g = sqrt(eps_f)
    int replicates = 3;
    std::uint64_t master_seed = 0;
    int max_iter = 1000;
    int j_max = 50;
    double eta = 0.5;
    double theta = 0.5;
    double grad_tol_floor = 1e-8;
    int jobs = 1;
};

inline void validate(const ExperimentPlan& plan) {
    if (plan.problems.empty()) throw std::invalid_argument("plan: no problems");
    if (plan.methods.empty()) throw std::invalid_argument("plan: no methods");
    if (plan.noise_levels.empty()) throw std::invalid_argument("plan: no noise levels");
    if (plan.replicates < 1) throw std::invalid_argument("plan: replicates must be >= 1");
    for (double e : plan.noise_levels)
        if (e < 0.0) throw std::invalid_argument("plan: noise levels must be >= 0");
    std::set<std::string> labels;
    for (const auto& m : plan.methods)
        if (!labels.insert(m.label).second)
            throw std::invalid_argument("plan: duplicate method label " + m.label);
    for (const auto& p : plan.problems)
        if (!testbed::known(p)) throw std::invalid_argument("plan: unknown problem " + p);
}

/// One-line digest of a run, sufficient for all tables and profiles.
struct RunSummary {
    std::string problem;
    int dim = 0;
    std::string method;
    double p = 1.0;
    double kappa_d = 1.0;
    double eps_f = 0.0;
    double eps_g = 0.0;
    int replicate = 0;
    std::uint64_t seed = 0;
    RunStatus status = RunStatus::MaxIter;
    long long iterations = 0;
    long long n_f_evals = 0;
    long long n_g_evals = 0;
    long long restarts = 0;
    double restart_fraction = 0.0;
    long long capped = 0;
    bool solved = false;
    long long first_success_iter = -1;
    std::optional<double> cost;
    bool discarded = false;
    double final_true_grad_inf = 0.0;
};

inline SolverConfig make_config(const ExperimentPlan& plan, const MethodSpec& m, double eps_f) {
    SolverConfig cfg;
    cfg.eta = plan.eta;
    cfg.theta = plan.theta;
    cfg.sigma_d = m.sigma_d;
    cfg.kappa_d = m.kappa_d;
    cfg.p = m.p;
    cfg.eps_f = eps_f;
    cfg.eps_g = std::sqrt(eps_f);
    cfg.max_iter = plan.max_iter;
    cfg.j_max = plan.j_max;
    cfg.grad_tol_floor = plan.grad_tol_floor;
    cfg.engine.kind = m.kind;
    cfg.engine.memory = m.memory;
    cfg.engine.eps_sy = m.eps_sy;
    cfg.engine.keep_memory_on_restart = m.keep_memory_on_restart;
    return cfg;
}

inline RunSummary summarize(const RunResult& rr, const MethodSpec& m, int replicate) {
    RunSummary s;
    s.problem = rr.meta.problem;
    s.dim = rr.meta.dim;
    s.method = m.label;
    s.p = m.p;
    s.kappa_d = m.kappa_d;
    s.eps_f = rr.meta.cfg.eps_f;
    s.eps_g = rr.meta.cfg.eps_g;
    s.replicate = replicate;
    s.seed = rr.meta.seed;
    s.status = rr.status;
    s.iterations = rr.iterations;
    s.n_f_evals = rr.n_f_evals;
    s.n_g_evals = rr.n_g_evals;
    s.restart_fraction = rr.restart_fraction;
    for (const auto& rec : rr.trace) {
        if (rec.restarted) ++s.restarts;
        if (rec.capped_ls) ++s.capped;
    }
    s.solved = rr.solved;
    s.first_success_iter = rr.first_success_iter;
    s.cost = run_cost(rr);
    s.discarded = rr.status == RunStatus::SpuriousInitialStop;
    s.final_true_grad_inf = rr.final_true_grad_norm_inf;
    return s;
}

/// Deterministic task-pool loop: slot i always receives task i's result, so
/// output is independent of the worker count and scheduling.
template <typename Body>
inline void parallel_for(std::size_t n, int jobs, Body&& body) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                body(i);
            }
        });
    for (auto& w : workers) w.join();
}

struct DiscardStat {
    double eps_f = 0.0;
    long long runs = 0;
    long long discarded = 0;
    double percent = 0.0;
};

struct PlanResult {
    std::vector<RunSummary> summaries; // ordered by (problem, method, noise, replicate)
    CostMatrix matrix;
    std::vector<DiscardStat> discards;
};

/// Execute every (problem, method, noise, replicate) combination with a seed
/// derived from the key, apply the discard rule, and collect the cost matrix.
inline PlanResult run_plan(const ExperimentPlan& plan) {
    validate(plan);

    std::map<std::string, ScaledProblem> scaled;
    for (const auto& name : plan.problems)
        if (!scaled.count(name)) scaled.emplace(name, scale(testbed::find(name)));

    struct Task {
        const std::string* problem;
        const MethodSpec* method;
        double eps_f;
        int replicate;
    };
    std::vector<Task> tasks;
    for (const auto& prob : plan.problems)
        for (const auto& m : plan.methods)
            for (double eps : plan.noise_levels)
                for (int r = 0; r < plan.replicates; ++r) tasks.push_back({&prob, &m, eps, r});

    PlanResult out;
    out.summaries.resize(tasks.size());
    parallel_for(tasks.size(), plan.jobs, [&](std::size_t i) {
        const Task& t = tasks[i];
        SolverConfig cfg = make_config(plan, *t.method, t.eps_f);
        std::uint64_t seed =
            derive_run_seed(plan.master_seed, *t.problem, t.method->label, t.eps_f, t.replicate);
        RunResult rr = run(scaled.at(*t.problem), cfg, seed);
        out.summaries[i] = summarize(rr, *t.method, t.replicate);
    });

    std::map<double, DiscardStat> dstats;
    for (const auto& s : out.summaries) {
        CostKey key{s.problem, s.method, s.eps_f, s.replicate};
        out.matrix.dims[s.problem] = s.dim;
        if (s.discarded)
            out.matrix.discards.insert(key);
        else
            out.matrix.entries[key] = s.cost;
        auto& d = dstats[s.eps_f];
        d.eps_f = s.eps_f;
        d.runs++;
        if (s.discarded) d.discarded++;
    }
    for (auto& [eps, d] : dstats) {
        d.percent = d.runs > 0 ? 100.0 * static_cast<double>(d.discarded) / d.runs : 0.0;
        out.discards.push_back(d);
    }
    return out;
}

/// Mean percentage of restarted iterations per (p, kappa_d) cell, over the
/// non-discarded runs of a restarted-variant grid at one noise level.
struct RestartTable {
    std::string engine; // "nlcgr" or "lbfgsr"
    double eps_f = 0.0;
    std::vector<double> p_values;
    std::vector<double> kappa_values;
    std::vector<std::vector<std::optional<double>>> cells; // [p][kappa], percent

    std::optional<double> cell(double p, double kappa) const {
        for (std::size_t i = 0; i < p_values.size(); ++i)
            for (std::size_t j = 0; j < kappa_values.size(); ++j)
                if (p_values[i] == p && kappa_values[j] == kappa) return cells[i][j];
        return std::nullopt;
    }

    /// Index of the smallest populated cell.
    std::optional<std::pair<std::size_t, std::size_t>> min_cell() const {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = 0; j < cells[i].size(); ++j)
                if (cells[i][j] && (!best || *cells[i][j] < *cells[best->first][best->second]))
                    best = {i, j};
        return best;
    }
};

inline std::vector<MethodSpec> grid_methods(const std::string& engine,
                                            const std::vector<double>& p_grid,
                                            const std::vector<double>& kappa_grid) {
    std::vector<MethodSpec> out;
    for (double p : p_grid)
        for (double k : kappa_grid)
            out.push_back(engine == "nlcgr" ? nlcgr_method(p, k, true) : lbfgsr_method(p, k, true));
    return out;
}

inline RestartTable restart_table(const std::vector<RunSummary>& summaries,
                                  const std::string& engine, double eps_f,
                                  const std::vector<double>& p_grid,
                                  const std::vector<double>& kappa_grid) {
    RestartTable t;
    t.engine = engine;
    t.eps_f = eps_f;
    t.p_values = p_grid;
    t.kappa_values = kappa_grid;
    t.cells.assign(p_grid.size(), std::vector<std::optional<double>>(kappa_grid.size()));
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        for (std::size_t j = 0; j < kappa_grid.size(); ++j) {
            const std::string label = grid_label(engine, p_grid[i], kappa_grid[j]);
            double sum = 0.0;
            long long n = 0;
            for (const auto& s : summaries) {
                if (s.discarded || s.eps_f != eps_f || s.method != label) continue;
                if (s.iterations == 0) continue;
                sum += 100.0 * s.restart_fraction;
                ++n;
            }
            if (n > 0) t.cells[i][j] = sum / static_cast<double>(n);
        }
    }
    return t;
}

} // namespace restartls::bench
