#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "restartls/bench.hpp"
#include "restartls/io.hpp"
#include "restartls/svg.hpp"

namespace restartls::bench {

inline std::string method_set_tag(const std::vector<std::string>& methods) {
    std::string tag;
    for (const auto& m : methods) {
        if (!tag.empty()) tag += '-';
        tag += m;
    }
    return tag;
}

/// Emit profile curves (CSV + SVG) for one noise level into out_dir.
/// File names encode the noise level and the method set.
inline void emit_profiles(const CostMatrix& matrix, const std::vector<std::string>& methods,
                          double eps_f, const std::filesystem::path& out_dir) {
    CostTable table = aggregate(matrix, methods, eps_f);
    const std::string tag = io::fmt(eps_f) + "_" + method_set_tag(methods);

    auto perf = performance_profile(table, methods);
    double x_max = 1.0;
    for (const auto& [m, c] : perf)
        for (double x : c.abscissae) x_max = std::max(x_max, x);
    io::write_file((out_dir / ("perf_profile_" + tag + ".csv")).string(),
                   io::profile_csv(perf, "tau"));
    io::write_file((out_dir / ("perf_profile_" + tag + ".svg")).string(),
                   svg::profile_plot(perf, "performance profile, eps_f = " + io::fmt(eps_f),
                                     "cost ratio tau", 1.0, x_max));

    auto data = data_profile(table, methods);
    double a_max = 1.0;
    for (const auto& [m, c] : data)
        for (double x : c.abscissae) a_max = std::max(a_max, x);
    io::write_file((out_dir / ("data_profile_" + tag + ".csv")).string(),
                   io::profile_csv(data, "alpha"));
    io::write_file((out_dir / ("data_profile_" + tag + ".svg")).string(),
                   svg::profile_plot(data, "data profile, eps_f = " + io::fmt(eps_f),
                                     "budget alpha in units of dim+1 gradients", 0.0, a_max));
}

/// Write every artifact of a finished plan: the cost matrix, run summaries
/// (CSV and JSON), discard statistics, and per-noise-level profiles.
/// Output is byte-identical across reruns with the same plan and master seed.
inline void emit_plan_artifacts(const PlanResult& result, const ExperimentPlan& plan,
                                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    io::write_file((out_dir / "cost_matrix.csv").string(), io::cost_matrix_csv(result.matrix));
    io::write_file((out_dir / "runs_summary.csv").string(), io::summaries_csv(result.summaries));
    io::write_file((out_dir / "runs.json").string(), io::runs_json(result.summaries).dump(2) + "\n");
    io::write_file((out_dir / "discards.json").string(),
                   io::discards_json(result.discards).dump(2) + "\n");
    if (plan.methods.size() >= 2) {
        std::vector<std::string> labels;
        for (const auto& m : plan.methods) labels.push_back(m.label);
        for (double eps : plan.noise_levels) emit_profiles(result.matrix, labels, eps, out_dir);
    }
}

} // namespace restartls::bench
