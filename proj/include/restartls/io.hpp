#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "restartls/bench.hpp"
#include "restartls/solver.hpp"
#include "restartls/theory.hpp"

namespace restartls::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal form; locale-independent and deterministic.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{}) throw std::invalid_argument("bad number: " + s);
    return v;
}

inline json kappa_to_json(double kappa) {
    if (std::isinf(kappa)) return "inf";
    return kappa;
}

inline double kappa_from_json(const json& j) {
    if (j.is_string()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

inline const char* engine_name(EngineKind k) {
    switch (k) {
        case EngineKind::GD: return "gd";
        case EngineKind::NLCG_PRP_PLUS: return "nlcg_prp_plus";
        case EngineKind::LBFGS: return "lbfgs";
    }
    return "gd";
}

inline EngineKind engine_from_name(const std::string& s) {
    if (s == "gd") return EngineKind::GD;
    if (s == "nlcg_prp_plus") return EngineKind::NLCG_PRP_PLUS;
    if (s == "lbfgs") return EngineKind::LBFGS;
    throw std::invalid_argument("unknown engine kind: " + s);
}

// ---------------------------------------------------------------------------
// RunResult JSON (schema restartls-run-v1, documented in docs/formats.md)
// ---------------------------------------------------------------------------

inline json to_json(const SolverConfig& c) {
    json j;
    j["eta"] = c.eta;
    j["theta"] = c.theta;
    j["sigma_d"] = c.sigma_d;
    j["kappa_d"] = kappa_to_json(c.kappa_d);
    j["p"] = c.p;
    j["eps_f"] = c.eps_f;
    j["eps_g"] = c.eps_g;
    j["max_iter"] = c.max_iter;
    j["j_max"] = c.j_max;
    j["grad_tol_floor"] = c.grad_tol_floor;
    j["engine"] = {{"kind", engine_name(c.engine.kind)},
                   {"memory", c.engine.memory},
                   {"eps_sy", c.engine.eps_sy},
                   {"keep_memory_on_restart", c.engine.keep_memory_on_restart},
                   {"force_beta_zero", c.engine.force_beta_zero}};
    j["enforce_adaptive_accuracy"] = c.enforce_adaptive_accuracy;
    j["sigma_phi"] = c.sigma_phi;
    j["alpha_bar_p"] = c.alpha_bar_p;
    return j;
}

inline SolverConfig solver_config_from_json(const json& j) {
    SolverConfig c;
    c.eta = j.at("eta");
    c.theta = j.at("theta");
    c.sigma_d = j.at("sigma_d");
    c.kappa_d = kappa_from_json(j.at("kappa_d"));
    c.p = j.at("p");
    c.eps_f = j.at("eps_f");
    c.eps_g = j.at("eps_g");
    c.max_iter = j.at("max_iter");
    c.j_max = j.at("j_max");
    c.grad_tol_floor = j.at("grad_tol_floor");
    const json& e = j.at("engine");
    c.engine.kind = engine_from_name(e.at("kind"));
    c.engine.memory = e.at("memory");
    c.engine.eps_sy = e.at("eps_sy");
    c.engine.keep_memory_on_restart = e.at("keep_memory_on_restart");
    c.engine.force_beta_zero = e.at("force_beta_zero");
    c.enforce_adaptive_accuracy = j.at("enforce_adaptive_accuracy");
    c.sigma_phi = j.at("sigma_phi");
    c.alpha_bar_p = j.at("alpha_bar_p");
    return c;
}

inline json to_json(const RunResult& rr) {
    json j;
    j["schema"] = "restartls-run-v1";
    json prob;
    prob["name"] = rr.meta.problem;
    prob["dim"] = rr.meta.dim;
    prob["scale"] = rr.meta.scale;
    prob["lipschitz_L"] = rr.meta.lipschitz_L ? json(*rr.meta.lipschitz_L) : json(nullptr);
    prob["f_low"] = rr.meta.f_low ? json(*rr.meta.f_low) : json(nullptr);
    j["problem"] = prob;
    j["method"] = rr.meta.method;
    j["seed"] = rr.meta.seed;
    j["config"] = to_json(rr.meta.cfg);
    j["status"] = to_string(rr.status);
    j["iterations"] = rr.iterations;
    j["n_f_evals"] = rr.n_f_evals;
    j["n_g_evals"] = rr.n_g_evals;
    j["restart_fraction"] = rr.restart_fraction;
    j["solved"] = rr.solved;
    j["first_success_iter"] = rr.first_success_iter;
    j["f0_true"] = rr.f0_true;
    j["non_finite_abort"] = rr.non_finite_abort;
    j["final"] = {{"f_true", rr.final_f_true},
                  {"g_norm_inf", rr.final_g_norm_inf},
                  {"true_grad_norm_inf", rr.final_true_grad_norm_inf},
                  {"true_grad_norm2", rr.final_true_grad_norm2},
                  {"x", rr.final_x}};
    json trace = json::array();
    for (const auto& r : rr.trace) {
        json t;
        t["k"] = r.k;
        t["alpha"] = r.alpha;
        t["j"] = r.j;
        t["restarted"] = r.restarted;
        t["steepest"] = r.steepest;
        t["capped_ls"] = r.capped_ls;
        t["g_norm_inf"] = r.g_norm_inf;
        t["g_norm2"] = r.g_norm2;
        t["true_grad_norm_inf"] = r.true_grad_norm_inf;
        t["true_grad_norm2"] = r.true_grad_norm2;
        t["f_true"] = r.f_true;
        t["g_dot_d"] = r.g_dot_d;
        t["d_norm"] = r.d_norm;
        t["f_evals"] = r.f_evals_so_far;
        t["g_evals"] = r.g_evals_so_far;
        trace.push_back(std::move(t));
    }
    j["trace"] = std::move(trace);
    return j;
}

inline RunResult run_result_from_json(const json& j) {
    if (j.value("schema", "") != "restartls-run-v1")
        throw std::invalid_argument("not a restartls-run-v1 document");
    RunResult rr;
    const json& prob = j.at("problem");
    rr.meta.problem = prob.at("name");
    rr.meta.dim = prob.at("dim");
    rr.meta.scale = prob.at("scale");
    if (!prob.at("lipschitz_L").is_null()) rr.meta.lipschitz_L = prob.at("lipschitz_L").get<double>();
    if (!prob.at("f_low").is_null()) rr.meta.f_low = prob.at("f_low").get<double>();
    rr.meta.method = j.at("method");
    rr.meta.seed = j.at("seed");
    rr.meta.cfg = solver_config_from_json(j.at("config"));
    auto st = run_status_from_string(j.at("status"));
    if (!st) throw std::invalid_argument("bad run status");
    rr.status = *st;
    rr.iterations = j.at("iterations");
    rr.n_f_evals = j.at("n_f_evals");
    rr.n_g_evals = j.at("n_g_evals");
    rr.restart_fraction = j.at("restart_fraction");
    rr.solved = j.at("solved");
    rr.first_success_iter = j.at("first_success_iter");
    rr.f0_true = j.at("f0_true");
    rr.non_finite_abort = j.at("non_finite_abort");
    const json& fin = j.at("final");
    rr.final_f_true = fin.at("f_true");
    rr.final_g_norm_inf = fin.at("g_norm_inf");
    rr.final_true_grad_norm_inf = fin.at("true_grad_norm_inf");
    rr.final_true_grad_norm2 = fin.at("true_grad_norm2");
    rr.final_x = fin.at("x").get<Vec>();
    for (const json& t : j.at("trace")) {
        IterationRecord r;
        r.k = t.at("k");
        r.alpha = t.at("alpha");
        r.j = t.at("j");
        r.restarted = t.at("restarted");
        r.steepest = t.at("steepest");
        r.capped_ls = t.at("capped_ls");
        r.g_norm_inf = t.at("g_norm_inf");
        r.g_norm2 = t.at("g_norm2");
        r.true_grad_norm_inf = t.at("true_grad_norm_inf");
        r.true_grad_norm2 = t.at("true_grad_norm2");
        r.f_true = t.at("f_true");
        r.g_dot_d = t.at("g_dot_d");
        r.d_norm = t.at("d_norm");
        r.f_evals_so_far = t.at("f_evals");
        r.g_evals_so_far = t.at("g_evals");
        rr.trace.push_back(r);
    }
    return rr;
}

inline json to_json(const theory::VerificationReport& rep) {
    json j;
    j["schema"] = "restartls-verify-v1";
    j["verifiable"] = rep.verifiable;
    if (!rep.verifiable) j["reason"] = rep.reason;
    j["pass"] = rep.pass();
    json c;
    c["alpha_bar_p"] = rep.constants.alpha_bar_p;
    c["alpha_bar_1"] = rep.constants.alpha_bar_1;
    c["c_N"] = rep.constants.c_N ? json(*rep.constants.c_N) : json(nullptr);
    c["c_R"] = rep.constants.c_R;
    c["j_bar_N"] = rep.constants.j_bar_N ? json(*rep.constants.j_bar_N) : json(nullptr);
    c["j_bar_R"] = rep.constants.j_bar_R;
    c["budget_bounded"] = rep.constants.budget.bounded;
    c["K_eps"] = rep.constants.budget.K_eps;
    c["eval_bound"] = rep.constants.budget.eval_bound;
    c["eps"] = rep.constants.budget.eps;
    c["noise_gate_ok"] = rep.constants.budget.noise_gate_ok;
    j["constants"] = c;
    j["gated_restarted"] = rep.gated_restarted;
    j["gated_nonrestarted"] = rep.gated_nonrestarted;
    j["backtrack_violations"] = rep.backtrack_violations;
    j["decrease_violations"] = rep.decrease_violations;
    j["budget_applicable"] = rep.budget_applicable;
    j["budget_ok"] = rep.budget_ok;
    j["first_eps_iter"] = rep.first_eps_iter;
    j["f_evals_to_eps"] = rep.f_evals_to_eps;
    return j;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string cost_matrix_csv(const bench::CostMatrix& m) {
    std::ostringstream os;
    os << "problem,dim,method,eps_f,replicate,cost,discarded\n";
    auto row = [&](const bench::CostKey& k, const std::optional<double>* cost, bool discarded) {
        os << k.problem << ',' << m.dims.at(k.problem) << ',' << k.method << ',' << fmt(k.eps_f)
           << ',' << k.replicate << ',';
        if (cost && *cost) os << fmt(**cost);
        else if (!discarded) os << "unsolved";
        os << ',' << (discarded ? 1 : 0) << '\n';
    };
    // entries and discards interleave in key order
    auto eit = m.entries.begin();
    auto dit = m.discards.begin();
    while (eit != m.entries.end() || dit != m.discards.end()) {
        bool take_entry = dit == m.discards.end() ||
                          (eit != m.entries.end() && eit->first < *dit);
        if (take_entry) {
            row(eit->first, &eit->second, false);
            ++eit;
        } else {
            row(*dit, nullptr, true);
            ++dit;
        }
    }
    return os.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline bench::CostMatrix cost_matrix_from_csv(std::istream& is) {
    bench::CostMatrix m;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("cost matrix: empty input");
    if (split_csv_line(line) !=
        std::vector<std::string>{"problem", "dim", "method", "eps_f", "replicate", "cost", "discarded"})
        throw std::invalid_argument("cost matrix: unexpected header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 7) throw std::invalid_argument("cost matrix: bad row: " + line);
        bench::CostKey key{f[0], f[2], parse_double(f[3]), static_cast<int>(parse_double(f[4]))};
        m.dims[f[0]] = static_cast<int>(parse_double(f[1]));
        if (f[6] == "1") {
            m.discards.insert(key);
        } else if (f[5] == "unsolved") {
            m.entries[key] = std::nullopt;
        } else {
            m.entries[key] = parse_double(f[5]);
        }
    }
    return m;
}

inline std::string summaries_csv(const std::vector<bench::RunSummary>& ss) {
    std::ostringstream os;
    os << "problem,dim,method,p,kappa_d,eps_f,eps_g,replicate,seed,status,iterations,"
          "n_f_evals,n_g_evals,restarts,restart_fraction,capped,solved,first_success_iter,"
          "cost,discarded,final_true_grad_inf\n";
    for (const auto& s : ss) {
        os << s.problem << ',' << s.dim << ',' << s.method << ',' << fmt(s.p) << ','
           << fmt(s.kappa_d) << ',' << fmt(s.eps_f) << ',' << fmt(s.eps_g) << ',' << s.replicate
           << ',' << s.seed << ',' << to_string(s.status) << ',' << s.iterations << ','
           << s.n_f_evals << ',' << s.n_g_evals << ',' << s.restarts << ','
           << fmt(s.restart_fraction) << ',' << s.capped << ',' << (s.solved ? 1 : 0) << ','
           << s.first_success_iter << ',' << (s.cost ? fmt(*s.cost) : std::string("unsolved"))
           << ',' << (s.discarded ? 1 : 0) << ',' << fmt(s.final_true_grad_inf) << '\n';
    }
    return os.str();
}

inline json to_json(const bench::RunSummary& s) {
    json j;
    j["problem"] = s.problem;
    j["dim"] = s.dim;
    j["method"] = s.method;
    j["p"] = s.p;
    j["kappa_d"] = kappa_to_json(s.kappa_d);
    j["eps_f"] = s.eps_f;
    j["eps_g"] = s.eps_g;
    j["replicate"] = s.replicate;
    j["seed"] = s.seed;
    j["status"] = to_string(s.status);
    j["iterations"] = s.iterations;
    j["n_f_evals"] = s.n_f_evals;
    j["n_g_evals"] = s.n_g_evals;
    j["restarts"] = s.restarts;
    j["restart_fraction"] = s.restart_fraction;
    j["capped"] = s.capped;
    j["solved"] = s.solved;
    j["first_success_iter"] = s.first_success_iter;
    j["cost"] = s.cost ? json(*s.cost) : json(nullptr);
    j["discarded"] = s.discarded;
    j["final_true_grad_inf"] = s.final_true_grad_inf;
    return j;
}

inline json runs_json(const std::vector<bench::RunSummary>& ss) {
    json j;
    j["schema"] = "restartls-runs-v1";
    json arr = json::array();
    for (const auto& s : ss) arr.push_back(to_json(s));
    j["runs"] = std::move(arr);
    return j;
}

inline json discards_json(const std::vector<bench::DiscardStat>& ds) {
    json j;
    j["schema"] = "restartls-discards-v1";
    json arr = json::array();
    for (const auto& d : ds)
        arr.push_back({{"eps_f", d.eps_f},
                       {"runs", d.runs},
                       {"discarded", d.discarded},
                       {"percent", d.percent}});
    j["levels"] = std::move(arr);
    return j;
}

inline std::string restart_table_csv(const bench::RestartTable& t) {
    std::ostringstream os;
    os << "p\\kappa";
    for (double k : t.kappa_values) os << ',' << fmt(k);
    os << '\n';
    for (std::size_t i = 0; i < t.p_values.size(); ++i) {
        os << fmt(t.p_values[i]);
        for (std::size_t jj = 0; jj < t.kappa_values.size(); ++jj) {
            os << ',';
            if (t.cells[i][jj]) os << fmt(*t.cells[i][jj]);
            else os << "missing";
        }
        os << '\n';
    }
    return os.str();
}

/// Fixed-width text rendering with the per-table minimum starred.
inline std::string restart_table_pretty(const bench::RestartTable& t) {
    std::ostringstream os;
    os << t.engine << " restart percentages, eps_f = " << fmt(t.eps_f) << "\n";
    auto mc = t.min_cell();
    os << "  p \\ kappa";
    for (double k : t.kappa_values) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), " %9.0e", k);
        os << buf;
    }
    os << '\n';
    for (std::size_t i = 0; i < t.p_values.size(); ++i) {
        char head[24];
        std::snprintf(head, sizeof(head), "  %-9g", t.p_values[i]);
        os << head;
        for (std::size_t jj = 0; jj < t.kappa_values.size(); ++jj) {
            char buf[24];
            if (t.cells[i][jj]) {
                bool is_min = mc && mc->first == i && mc->second == jj;
                std::snprintf(buf, sizeof(buf), " %8.2f%c", *t.cells[i][jj], is_min ? '*' : ' ');
            } else {
                std::snprintf(buf, sizeof(buf), " %9s", "--");
            }
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

inline std::string profile_csv(const std::map<std::string, bench::ProfileCurve>& curves,
                               const std::string& x_name) {
    std::ostringstream os;
    os << "method," << x_name << ",fraction\n";
    for (const auto& [m, c] : curves)
        for (std::size_t i = 0; i < c.abscissae.size(); ++i)
            os << m << ',' << fmt(c.abscissae[i]) << ',' << fmt(c.ordinates[i]) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// experiment plan JSON (schema restartls-plan-v1)
// ---------------------------------------------------------------------------

/// Parse a plan from JSON. Methods are either plain names ("gd") or objects
/// {"name": "nlcgr", "p": 0.5, "kappa": 1e3, "label": "..."}; problems may be
/// the string "all". Unset fields keep the plan defaults.
inline bench::ExperimentPlan plan_from_json(const json& j,
                                            const std::vector<std::string>& all_problems) {
    if (j.value("schema", "restartls-plan-v1") != "restartls-plan-v1")
        throw std::invalid_argument("not a restartls-plan-v1 document");
    bench::ExperimentPlan plan;
    if (!j.contains("problems") || (j.at("problems").is_string() && j.at("problems") == "all")) {
        plan.problems = all_problems;
    } else {
        for (const auto& p : j.at("problems")) plan.problems.push_back(p.get<std::string>());
    }
    if (j.contains("methods")) {
        for (const auto& m : j.at("methods")) {
            if (m.is_string()) {
                plan.methods.push_back(bench::parse_method(m.get<std::string>()));
            } else {
                double p = m.value("p", 0.75);
                double kappa = m.contains("kappa") ? kappa_from_json(m.at("kappa")) : 1e6;
                auto spec = bench::parse_method(m.at("name").get<std::string>(), p, kappa);
                if (m.contains("label")) spec.label = m.at("label").get<std::string>();
                if (m.contains("memory")) spec.memory = m.at("memory").get<int>();
                if (m.contains("eps_sy")) spec.eps_sy = m.at("eps_sy").get<double>();
                if (m.contains("keep_memory_on_restart"))
                    spec.keep_memory_on_restart = m.at("keep_memory_on_restart").get<bool>();
                plan.methods.push_back(spec);
            }
        }
    } else {
        plan.methods = bench::default_methods();
    }
    if (j.contains("noise_levels"))
        for (const auto& e : j.at("noise_levels")) plan.noise_levels.push_back(e.get<double>());
    else
        plan.noise_levels = {0.0, 1e-8, 1e-4, 1e-2, 1e-1};
    plan.replicates = j.value("replicates", plan.replicates);
    plan.master_seed = j.value("master_seed", plan.master_seed);
    plan.max_iter = j.value("max_iter", plan.max_iter);
    plan.j_max = j.value("j_max", plan.j_max);
    plan.eta = j.value("eta", plan.eta);
    plan.theta = j.value("theta", plan.theta);
    plan.grad_tol_floor = j.value("grad_tol_floor", plan.grad_tol_floor);
    plan.jobs = j.value("jobs", plan.jobs);
    return plan;
}

// ---------------------------------------------------------------------------
// files
// ---------------------------------------------------------------------------

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace restartls::io
