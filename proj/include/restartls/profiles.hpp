#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace restartls::bench {

/// Per-run key of the cost matrix.
struct CostKey {
    std::string problem;
    std::string method;
    double eps_f = 0.0;
    int replicate = 0;

    friend bool operator<(const CostKey& a, const CostKey& b) {
        if (a.problem != b.problem) return a.problem < b.problem;
        if (a.method != b.method) return a.method < b.method;
        if (a.eps_f != b.eps_f) return a.eps_f < b.eps_f;
        return a.replicate < b.replicate;
    }
    friend bool operator==(const CostKey& a, const CostKey& b) {
        return a.problem == b.problem && a.method == b.method && a.eps_f == b.eps_f &&
               a.replicate == b.replicate;
    }
};

/// Gradient-evaluation costs of all non-discarded runs. A run without a value
/// is UNSOLVED; discarded runs are kept apart and never contribute.
struct CostMatrix {
    std::map<CostKey, std::optional<double>> entries;
    std::map<std::string, int> dims;
    std::set<CostKey> discards;
};

/// Right-continuous nondecreasing step function with ordinates in [0, 1].
struct ProfileCurve {
    std::vector<double> abscissae; // sorted
    std::vector<double> ordinates;

    double value_at(double x) const {
        double v = 0.0;
        for (std::size_t i = 0; i < abscissae.size(); ++i) {
            if (abscissae[i] <= x) v = ordinates[i];
            else break;
        }
        return v;
    }
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Median with UNSOLVED treated as +inf; an even count averages the two middle
/// values (infinite if either is).
inline std::optional<double> median_cost(std::vector<std::optional<double>> costs) {
    if (costs.empty()) return std::nullopt;
    std::vector<double> v;
    v.reserve(costs.size());
    for (const auto& c : costs) v.push_back(c ? *c : kInf);
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    double m;
    if (n % 2 == 1) {
        m = v[n / 2];
    } else {
        double a = v[n / 2 - 1], b = v[n / 2];
        m = (std::isinf(a) || std::isinf(b)) ? kInf : 0.5 * (a + b);
    }
    if (std::isinf(m)) return std::nullopt;
    return m;
}

} // namespace detail

/// Costs aggregated to one value per (problem, method) at a fixed noise level:
/// the median over non-discarded replicates.
struct CostTable {
    std::vector<std::string> problems; // sorted
    std::map<std::string, int> dims;
    std::map<std::pair<std::string, std::string>, std::optional<double>> cost; // (problem, method)
};

inline CostTable aggregate(const CostMatrix& m, const std::vector<std::string>& methods,
                           double eps_f) {
    CostTable t;
    std::set<std::string> probs;
    std::map<std::pair<std::string, std::string>, std::vector<std::optional<double>>> reps;
    for (const auto& [key, cost] : m.entries) {
        if (key.eps_f != eps_f) continue;
        if (std::find(methods.begin(), methods.end(), key.method) == methods.end()) continue;
        probs.insert(key.problem);
        reps[{key.problem, key.method}].push_back(cost);
    }
    t.problems.assign(probs.begin(), probs.end());
    for (const auto& p : t.problems) {
        auto it = m.dims.find(p);
        if (it == m.dims.end()) throw std::invalid_argument("aggregate: missing dimension for " + p);
        t.dims[p] = it->second;
        for (const auto& meth : methods) {
            auto rit = reps.find({p, meth});
            t.cost[{p, meth}] =
                rit == reps.end() ? std::nullopt : detail::median_cost(rit->second);
        }
    }
    return t;
}

/// Dolan-More performance profiles: per problem the cost ratio against the
/// best method (UNSOLVED ratios are infinite), then per method the cumulative
/// fraction of problems with ratio <= tau, stepped at the sorted finite ratios.
inline std::map<std::string, ProfileCurve> performance_profile(
    const CostTable& t, const std::vector<std::string>& methods) {
    if (methods.size() < 2)
        throw std::invalid_argument("performance_profile: need at least 2 methods");
    const double inf = detail::kInf;
    std::size_t np = t.problems.size();
    std::map<std::string, std::vector<double>> ratios;
    for (const auto& p : t.problems) {
        double best = inf;
        for (const auto& m : methods) {
            auto c = t.cost.at({p, m});
            if (c) best = std::min(best, *c);
        }
        for (const auto& m : methods) {
            auto c = t.cost.at({p, m});
            double r = (c && std::isfinite(best)) ? *c / best : inf;
            ratios[m].push_back(r);
        }
    }
    std::map<std::string, ProfileCurve> out;
    for (const auto& m : methods) {
        const auto& r = ratios[m];
        std::set<double> xs{1.0};
        for (double v : r)
            if (std::isfinite(v)) xs.insert(v);
        ProfileCurve c;
        for (double x : xs) {
            std::size_t cnt = 0;
            for (double v : r)
                if (v <= x) ++cnt;
            c.abscissae.push_back(x);
            c.ordinates.push_back(np ? static_cast<double>(cnt) / np : 0.0);
        }
        out[m] = std::move(c);
    }
    return out;
}

/// More-Wild data profiles: fraction of problems solved within a budget of
/// alpha * (dim + 1) gradient evaluations.
inline std::map<std::string, ProfileCurve> data_profile(
    const CostTable& t, const std::vector<std::string>& methods) {
    if (methods.empty()) throw std::invalid_argument("data_profile: need at least 1 method");
    std::size_t np = t.problems.size();
    std::map<std::string, ProfileCurve> out;
    for (const auto& m : methods) {
        std::set<double> xs{0.0};
        for (const auto& p : t.problems) {
            auto c = t.cost.at({p, m});
            if (c) xs.insert(*c / (t.dims.at(p) + 1.0));
        }
        ProfileCurve curve;
        for (double x : xs) {
            std::size_t cnt = 0;
            for (const auto& p : t.problems) {
                auto c = t.cost.at({p, m});
                if (c && *c <= x * (t.dims.at(p) + 1.0)) ++cnt;
            }
            curve.abscissae.push_back(x);
            curve.ordinates.push_back(np ? static_cast<double>(cnt) / np : 0.0);
        }
        out[m] = std::move(curve);
    }
    return out;
}

} // namespace restartls::bench
