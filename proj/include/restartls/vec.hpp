#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace restartls {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

inline Vec negated(const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

/// y + alpha * x
inline Vec add_scaled(const Vec& y, double alpha, const Vec& x) {
    Vec r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] + alpha * x[i];
    return r;
}

/// r += alpha * x
inline void axpy_inplace(Vec& r, double alpha, const Vec& x) {
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += alpha * x[i];
}

inline Vec scaled(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

/// Exact element-wise equality (bit-level up to signed zeros).
inline bool same_vector(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace restartls
