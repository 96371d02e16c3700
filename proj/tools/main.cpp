// Command-line benchmark harness for the restarted line-search solvers.
//
//   restartls solve    one run, trace summary on stdout, optional JSON dump
//   restartls bench    sweep methods x problems x noise levels x replicates
//   restartls profiles recompute performance/data profiles from a cost matrix
//   restartls tables   restart-percentage tables over a (p, kappa) grid
//   restartls verify   check a recorded run against the complexity guarantees

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "restartls/restartls.hpp"

namespace rl = restartls;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(rl::io::parse_double(item));
    return out;
}

std::vector<std::string> all_problem_names() {
    std::vector<std::string> out;
    for (const auto& p : rl::testbed::registry()) out.push_back(p.name);
    return out;
}

void print_run_summary(const rl::RunResult& rr) {
    std::printf("problem            %s (n=%d, scale=%s)\n", rr.meta.problem.c_str(), rr.meta.dim,
                rl::io::fmt(rr.meta.scale).c_str());
    std::printf("method             %s\n", rr.meta.method.c_str());
    std::printf("status             %s\n", rl::to_string(rr.status));
    std::printf("iterations         %lld\n", rr.iterations);
    std::printf("f evals / g evals  %lld / %lld\n", rr.n_f_evals, rr.n_g_evals);
    std::printf("restart fraction   %s\n", rl::io::fmt(rr.restart_fraction).c_str());
    std::printf("solved             %s (first success iterate %lld)\n", rr.solved ? "yes" : "no",
                rr.first_success_iter);
    std::printf("final f            %s\n", rl::io::fmt(rr.final_f_true).c_str());
    std::printf("final |grad|_inf   %s (noisy %s)\n",
                rl::io::fmt(rr.final_true_grad_norm_inf).c_str(),
                rl::io::fmt(rr.final_g_norm_inf).c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"restarted line-search benchmark harness for noisy unconstrained minimization"};
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "run one solver instance on one problem");
    std::string sv_problem = "rosenbrock2", sv_method = "lbfgs", sv_out;
    double sv_eps_f = 0.0, sv_eps_g = -1.0, sv_p = 0.75, sv_kappa = 1e6;
    double sv_eta = 0.5, sv_theta = 0.5, sv_tol = 1e-8, sv_sigma_phi = 0.5;
    std::uint64_t sv_seed = 0;
    int sv_max_iter = 1000, sv_jmax = 50;
    bool sv_enforce = false;
    solve->add_option("--problem", sv_problem, "problem name from the registry");
    solve->add_option("--method", sv_method, "gd|nlcg|lbfgs|nlcgr|lbfgsr");
    solve->add_option("--eps-f", sv_eps_f, "function noise level");
    solve->add_option("--eps-g", sv_eps_g, "gradient noise level (default sqrt(eps_f))");
    solve->add_option("--p", sv_p, "restart exponent for nlcgr/lbfgsr");
    solve->add_option("--kappa", sv_kappa, "kappa_d for nlcgr/lbfgsr (sigma_d = 1/kappa)");
    solve->add_option("--eta", sv_eta, "line search sufficient-decrease factor");
    solve->add_option("--theta", sv_theta, "backtracking factor");
    solve->add_option("--seed", sv_seed, "noise seed");
    solve->add_option("--max-iter", sv_max_iter, "iteration cap");
    solve->add_option("--j-max", sv_jmax, "backtrack cap");
    solve->add_option("--tol", sv_tol, "gradient tolerance floor");
    solve->add_flag("--enforce-accuracy", sv_enforce,
                    "adaptive gradient-accuracy noise (theory verification mode)");
    solve->add_option("--sigma-phi", sv_sigma_phi, "relative accuracy level for --enforce-accuracy");
    solve->add_option("--out", sv_out, "write the full run record as JSON");

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "run an experiment plan and emit all artifacts");
    std::string bn_problems = "all", bn_methods = "gd,nlcg,lbfgs,nlcgr,lbfgsr";
    std::string bn_noise = "0,1e-8,1e-4,1e-2,1e-1", bn_out = "bench_out", bn_config;
    int bn_reps = 3, bn_jobs = 0, bn_max_iter = 1000;
    std::uint64_t bn_seed = 0;
    double bn_p = 0.75, bn_kappa = 1e6;
    bench->add_option("--config", bn_config, "experiment plan JSON (overrides the plan flags)");
    bench->add_option("--problems", bn_problems, "comma list of problems, or 'all'");
    bench->add_option("--methods", bn_methods, "comma list of gd|nlcg|lbfgs|nlcgr|lbfgsr");
    bench->add_option("--noise", bn_noise, "comma list of eps_f levels (eps_g = sqrt(eps_f))");
    bench->add_option("--reps", bn_reps, "replicates per combination");
    bench->add_option("--seed", bn_seed, "master seed");
    bench->add_option("--jobs", bn_jobs, "worker threads (0 = hardware)");
    bench->add_option("--max-iter", bn_max_iter, "iteration cap per run");
    bench->add_option("--p", bn_p, "restart exponent for nlcgr/lbfgsr");
    bench->add_option("--kappa", bn_kappa, "kappa_d for nlcgr/lbfgsr");
    bench->add_option("--out", bn_out, "output directory");

    // ---- profiles ----
    auto* prof = app.add_subcommand("profiles", "recompute profiles from a stored cost matrix");
    std::string pf_matrix, pf_methods, pf_out = "profiles_out";
    double pf_noise = 0.0;
    prof->add_option("--matrix", pf_matrix, "cost_matrix.csv from a bench run")->required();
    prof->add_option("--noise", pf_noise, "noise level to profile");
    prof->add_option("--methods", pf_methods, "method subset (default: all in the matrix)");
    prof->add_option("--out", pf_out, "output directory");

    // ---- tables ----
    auto* tables = app.add_subcommand("tables", "restart statistics over a (p, kappa) grid");
    std::string tb_problems = "all", tb_engine = "both", tb_out = "tables_out";
    std::string tb_pgrid = "0,0.25,0.5,0.75,1", tb_kgrid = "1e2,1e3,1e4,1e5,1e6";
    std::string tb_noise = "0";
    int tb_reps = 1, tb_jobs = 0;
    std::uint64_t tb_seed = 0;
    tables->add_option("--problems", tb_problems, "comma list of problems, or 'all'");
    tables->add_option("--engine", tb_engine, "nlcgr|lbfgsr|both");
    tables->add_option("--p-grid", tb_pgrid, "grid of restart exponents");
    tables->add_option("--kappa-grid", tb_kgrid, "grid of kappa_d values");
    tables->add_option("--noise", tb_noise, "comma list of eps_f levels");
    tables->add_option("--reps", tb_reps, "replicates per combination");
    tables->add_option("--seed", tb_seed, "master seed");
    tables->add_option("--jobs", tb_jobs, "worker threads (0 = hardware)");
    tables->add_option("--out", tb_out, "output directory");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "check a run record against the theory bounds");
    std::string vf_in, vf_out;
    verify->add_option("--in", vf_in, "run JSON produced by 'solve --out'")->required();
    verify->add_option("--out", vf_out, "write the verification report as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            rl::bench::MethodSpec m = rl::bench::parse_method(sv_method, sv_p, sv_kappa);
            rl::SolverConfig cfg;
            cfg.eta = sv_eta;
            cfg.theta = sv_theta;
            cfg.sigma_d = m.sigma_d;
            cfg.kappa_d = m.kappa_d;
            cfg.p = m.p;
            cfg.eps_f = sv_eps_f;
            cfg.eps_g = sv_eps_g < 0.0 ? std::sqrt(sv_eps_f) : sv_eps_g;
            cfg.max_iter = sv_max_iter;
            cfg.j_max = sv_jmax;
            cfg.grad_tol_floor = sv_tol;
            cfg.engine.kind = m.kind;
            rl::ScaledProblem prob = rl::scale(rl::testbed::find(sv_problem));
            if (sv_enforce) {
                auto L = prob.lipschitz_L();
                if (!L) {
                    std::fprintf(stderr, "error: --enforce-accuracy needs a problem with known L\n");
                    return 1;
                }
                rl::theory::TheoryParams tp;
                tp.eta = cfg.eta;
                tp.theta = cfg.theta;
                tp.sigma_d = cfg.sigma_d;
                tp.kappa_d = cfg.kappa_d;
                tp.p = cfg.p;
                tp.sigma_phi = sv_sigma_phi;
                tp.L = *L;
                cfg.enforce_adaptive_accuracy = true;
                cfg.sigma_phi = sv_sigma_phi;
                cfg.alpha_bar_p = rl::theory::alpha_bar_p(tp);
            }
            rl::RunResult rr = rl::run(prob, cfg, sv_seed);
            rr.meta.method = m.label;
            print_run_summary(rr);
            if (!sv_out.empty()) {
                rl::io::write_file(sv_out, rl::io::to_json(rr).dump(2) + "\n");
                std::printf("run record written to %s\n", sv_out.c_str());
            }
            return 0;
        }

        if (*bench) {
            rl::bench::ExperimentPlan plan;
            if (!bn_config.empty()) {
                rl::io::json j = rl::io::json::parse(rl::io::read_file(bn_config));
                plan = rl::io::plan_from_json(j, all_problem_names());
            } else {
                plan.problems =
                    bn_problems == "all" ? all_problem_names() : split_list(bn_problems);
                for (const auto& name : split_list(bn_methods))
                    plan.methods.push_back(rl::bench::parse_method(name, bn_p, bn_kappa));
                plan.noise_levels = split_doubles(bn_noise);
                plan.replicates = bn_reps;
                plan.master_seed = bn_seed;
                plan.max_iter = bn_max_iter;
                plan.jobs = 0; // resolved below
            }
            if (bn_jobs > 0)
                plan.jobs = bn_jobs;
            else if (plan.jobs <= 0)
                plan.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
            rl::bench::validate(plan);
            fs::create_directories(bn_out); // fail before any computation
            rl::bench::PlanResult result = rl::bench::run_plan(plan);
            rl::bench::emit_plan_artifacts(result, plan, bn_out);
            for (const auto& d : result.discards)
                std::printf("eps_f=%-8s runs=%lld discarded=%lld (%.2f%%)\n",
                            rl::io::fmt(d.eps_f).c_str(), d.runs, d.discarded, d.percent);
            std::printf("artifacts written to %s\n", bn_out.c_str());
            return 0;
        }

        if (*prof) {
            std::istringstream is(rl::io::read_file(pf_matrix));
            rl::bench::CostMatrix matrix = rl::io::cost_matrix_from_csv(is);
            std::vector<std::string> methods;
            if (pf_methods.empty()) {
                std::set<std::string> seen;
                for (const auto& [k, c] : matrix.entries)
                    if (k.eps_f == pf_noise) seen.insert(k.method);
                methods.assign(seen.begin(), seen.end());
            } else {
                methods = split_list(pf_methods);
            }
            if (methods.size() < 2) {
                std::fprintf(stderr, "error: profiles need at least 2 methods at this noise level\n");
                return 1;
            }
            fs::create_directories(pf_out);
            rl::bench::emit_profiles(matrix, methods, pf_noise, pf_out);
            std::printf("profiles written to %s\n", pf_out.c_str());
            return 0;
        }

        if (*tables) {
            std::vector<double> p_grid = split_doubles(tb_pgrid);
            std::vector<double> kappa_grid = split_doubles(tb_kgrid);
            std::vector<std::string> engines =
                tb_engine == "both" ? std::vector<std::string>{"nlcgr", "lbfgsr"}
                                    : std::vector<std::string>{tb_engine};
            rl::bench::ExperimentPlan plan;
            plan.problems = tb_problems == "all" ? all_problem_names() : split_list(tb_problems);
            for (const auto& e : engines)
                for (const auto& m : rl::bench::grid_methods(e, p_grid, kappa_grid))
                    plan.methods.push_back(m);
            plan.noise_levels = split_doubles(tb_noise);
            plan.replicates = tb_reps;
            plan.master_seed = tb_seed;
            plan.jobs = tb_jobs > 0 ? tb_jobs
                                    : std::max(1u, std::thread::hardware_concurrency());
            rl::bench::validate(plan);
            fs::create_directories(tb_out);
            rl::bench::PlanResult result = rl::bench::run_plan(plan);
            for (const auto& e : engines) {
                for (double eps : plan.noise_levels) {
                    rl::bench::RestartTable t =
                        rl::bench::restart_table(result.summaries, e, eps, p_grid, kappa_grid);
                    std::string name = "restart_table_" + e + "_" + rl::io::fmt(eps) + ".csv";
                    rl::io::write_file((fs::path(tb_out) / name).string(),
                                       rl::io::restart_table_csv(t));
                    std::printf("%s\n", rl::io::restart_table_pretty(t).c_str());
                }
            }
            std::printf("tables written to %s\n", tb_out.c_str());
            return 0;
        }

        if (*verify) {
            rl::io::json j = rl::io::json::parse(rl::io::read_file(vf_in));
            rl::RunResult rr = rl::io::run_result_from_json(j);
            if (rr.meta.cfg.eps_g > 0.0 && !rr.meta.cfg.enforce_adaptive_accuracy)
                std::fprintf(stderr,
                             "warning: run used plain ball noise; the per-iteration bounds "
                             "assume the adaptive accuracy mode\n");
            rl::theory::VerificationReport rep = rl::theory::verify_trace(rr);
            rl::io::json out = rl::io::to_json(rep);
            if (!rep.verifiable) {
                std::printf("not verifiable: %s\n", rep.reason.c_str());
            } else {
                std::printf("gated iterations     %lld restarted, %lld non-restarted\n",
                            rep.gated_restarted, rep.gated_nonrestarted);
                std::printf("backtrack cap        %s (%zu violations)\n",
                            rep.backtrack_violations.empty() ? "ok" : "VIOLATED",
                            rep.backtrack_violations.size());
                std::printf("decrease guarantee   %s (%zu violations)\n",
                            rep.decrease_violations.empty() ? "ok" : "VIOLATED",
                            rep.decrease_violations.size());
                if (rep.budget_applicable)
                    std::printf("iteration budget     %s (first eps-stationary iterate %lld, "
                                "K_eps %s, f evals %lld <= %s)\n",
                                rep.budget_ok ? "ok" : "VIOLATED", rep.first_eps_iter,
                                rl::io::fmt(rep.constants.budget.K_eps).c_str(),
                                rep.f_evals_to_eps,
                                rl::io::fmt(rep.constants.budget.eval_bound).c_str());
                else
                    std::printf("iteration budget     not applicable (noise gate or budget unbounded)\n");
                std::printf("overall              %s\n", rep.pass() ? "PASS" : "FAIL");
            }
            if (!vf_out.empty()) rl::io::write_file(vf_out, out.dump(2) + "\n");
            return rep.pass() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
