#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "restartls/problem.hpp"

namespace restartls::testbed {

namespace detail {

inline Vec fill(int n, double v) { return Vec(static_cast<std::size_t>(n), v); }

/// 0.5 * sum_i lambda_i x_i^2 with lambda_i linearly spaced in [1, cond].
/// L = cond, lower bound 0.
inline Problem diag_quadratic(std::string name, int n, double cond, Vec x0) {
    Vec lam(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        lam[i] = n == 1 ? cond : 1.0 + (cond - 1.0) * static_cast<double>(i) / (n - 1);
    Problem p;
    p.name = std::move(name);
    p.dim = n;
    p.x0 = std::move(x0);
    p.lipschitz_L = cond;
    p.f_low = 0.0;
    p.eval_f = [lam](const Vec& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += lam[i] * x[i] * x[i];
        return 0.5 * s;
    };
    p.eval_grad = [lam](const Vec& x) {
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = lam[i] * x[i];
        return g;
    };
    return p;
}

/// Chained Rosenbrock: sum_{i<n-1} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2.
inline Problem rosenbrock(std::string name, int n) {
    Vec x0(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x0[i] = (i % 2 == 0) ? -1.2 : 1.0;
    Problem p;
    p.name = std::move(name);
    p.dim = n;
    p.x0 = std::move(x0);
    p.f_low = 0.0;
    p.eval_f = [](const Vec& x) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            double a = x[i + 1] - x[i] * x[i];
            double b = 1.0 - x[i];
            s += 100.0 * a * a + b * b;
        }
        return s;
    };
    p.eval_grad = [](const Vec& x) {
        Vec g(x.size(), 0.0);
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            double a = x[i + 1] - x[i] * x[i];
            g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
            g[i + 1] += 200.0 * a;
        }
        return g;
    };
    return p;
}

inline Problem beale() {
    Problem p;
    p.name = "beale";
    p.dim = 2;
    p.x0 = {1.0, 1.0};
    p.f_low = 0.0;
    p.eval_f = [](const Vec& v) {
        double x = v[0], y = v[1];
        double a = 1.5 - x + x * y;
        double b = 2.25 - x + x * y * y;
        double c = 2.625 - x + x * y * y * y;
        return a * a + b * b + c * c;
    };
    p.eval_grad = [](const Vec& v) {
        double x = v[0], y = v[1];
        double a = 1.5 - x + x * y;
        double b = 2.25 - x + x * y * y;
        double c = 2.625 - x + x * y * y * y;
        Vec g(2);
        g[0] = 2.0 * a * (y - 1.0) + 2.0 * b * (y * y - 1.0) + 2.0 * c * (y * y * y - 1.0);
        g[1] = 2.0 * a * x + 2.0 * b * 2.0 * x * y + 2.0 * c * 3.0 * x * y * y;
        return g;
    };
    return p;
}

/// Powell singular function in blocks of 4 variables.
inline Problem powell_singular(std::string name, int n) {
    if (n % 4 != 0) throw std::invalid_argument("powell_singular: dim must be a multiple of 4");
    Vec x0(static_cast<std::size_t>(n));
    for (int i = 0; i < n; i += 4) {
        x0[i] = 3.0;
        x0[i + 1] = -1.0;
        x0[i + 2] = 0.0;
        x0[i + 3] = 1.0;
    }
    Problem p;
    p.name = std::move(name);
    p.dim = n;
    p.x0 = std::move(x0);
    p.f_low = 0.0;
    p.eval_f = [](const Vec& x) {
        double s = 0.0;
        for (std::size_t i = 0; i + 3 < x.size(); i += 4) {
            double a = x[i] + 10.0 * x[i + 1];
            double b = x[i + 2] - x[i + 3];
            double c = x[i + 1] - 2.0 * x[i + 2];
            double d = x[i] - x[i + 3];
            s += a * a + 5.0 * b * b + c * c * c * c + 10.0 * d * d * d * d;
        }
        return s;
    };
    p.eval_grad = [](const Vec& x) {
        Vec g(x.size(), 0.0);
        for (std::size_t i = 0; i + 3 < x.size(); i += 4) {
            double a = x[i] + 10.0 * x[i + 1];
            double b = x[i + 2] - x[i + 3];
            double c = x[i + 1] - 2.0 * x[i + 2];
            double d = x[i] - x[i + 3];
            double c3 = c * c * c, d3 = d * d * d;
            g[i] = 2.0 * a + 40.0 * d3;
            g[i + 1] = 20.0 * a + 4.0 * c3;
            g[i + 2] = 10.0 * b - 8.0 * c3;
            g[i + 3] = -10.0 * b - 40.0 * d3;
        }
        return g;
    };
    return p;
}

inline Problem dixon_price(int n) {
    Problem p;
    p.name = "dixon_price" + std::to_string(n);
    p.dim = n;
    p.x0 = fill(n, 1.0);
    p.f_low = 0.0;
    p.eval_f = [](const Vec& x) {
        double s = (x[0] - 1.0) * (x[0] - 1.0);
        for (std::size_t i = 1; i < x.size(); ++i) {
            double t = 2.0 * x[i] * x[i] - x[i - 1];
            s += static_cast<double>(i + 1) * t * t;
        }
        return s;
    };
    p.eval_grad = [](const Vec& x) {
        Vec g(x.size(), 0.0);
        g[0] = 2.0 * (x[0] - 1.0);
        for (std::size_t i = 1; i < x.size(); ++i) {
            double w = static_cast<double>(i + 1);
            double t = 2.0 * x[i] * x[i] - x[i - 1];
            g[i] += 8.0 * w * x[i] * t;
            g[i - 1] += -2.0 * w * t;
        }
        return g;
    };
    return p;
}

/// Trigonometric test function: residuals
/// f_i = n - sum_j cos x_j + (i+1)(1 - cos x_i) - sin x_i, objective sum f_i^2.
inline Problem trigonometric(int n) {
    Problem p;
    p.name = "trig" + std::to_string(n);
    p.dim = n;
    p.x0 = fill(n, 1.0 / static_cast<double>(n));
    p.f_low = 0.0;
    auto residuals = [](const Vec& x) {
        std::size_t n = x.size();
        double csum = 0.0;
        for (double v : x) csum += std::cos(v);
        Vec f(n);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = static_cast<double>(n) - csum +
                   static_cast<double>(i + 1) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
        return f;
    };
    p.eval_f = [residuals](const Vec& x) {
        Vec f = residuals(x);
        return dot(f, f);
    };
    p.eval_grad = [residuals](const Vec& x) {
        std::size_t n = x.size();
        Vec f = residuals(x);
        double fsum = 0.0;
        for (double v : f) fsum += v;
        Vec g(n);
        for (std::size_t j = 0; j < n; ++j) {
            double sj = std::sin(x[j]), cj = std::cos(x[j]);
            g[j] = 2.0 * sj * fsum + 2.0 * f[j] * (static_cast<double>(j + 1) * sj - cj);
        }
        return g;
    };
    return p;
}

inline Problem booth() {
    Problem p;
    p.name = "booth";
    p.dim = 2;
    p.x0 = {0.0, 0.0};
    p.lipschitz_L = 18.0; // largest Hessian eigenvalue
    p.f_low = 0.0;
    p.eval_f = [](const Vec& v) {
        double a = v[0] + 2.0 * v[1] - 7.0;
        double b = 2.0 * v[0] + v[1] - 5.0;
        return a * a + b * b;
    };
    p.eval_grad = [](const Vec& v) {
        double a = v[0] + 2.0 * v[1] - 7.0;
        double b = 2.0 * v[0] + v[1] - 5.0;
        return Vec{2.0 * a + 4.0 * b, 4.0 * a + 2.0 * b};
    };
    return p;
}

inline Problem matyas() {
    Problem p;
    p.name = "matyas";
    p.dim = 2;
    p.x0 = {1.0, -1.0};
    p.lipschitz_L = 1.0; // eigenvalues of the Hessian are 0.04 and 1
    p.f_low = 0.0;
    p.eval_f = [](const Vec& v) {
        return 0.26 * (v[0] * v[0] + v[1] * v[1]) - 0.48 * v[0] * v[1];
    };
    p.eval_grad = [](const Vec& v) {
        return Vec{0.52 * v[0] - 0.48 * v[1], 0.52 * v[1] - 0.48 * v[0]};
    };
    return p;
}

inline Problem himmelblau() {
    Problem p;
    p.name = "himmelblau";
    p.dim = 2;
    p.x0 = {1.0, 1.0};
    p.f_low = 0.0;
    p.eval_f = [](const Vec& v) {
        double a = v[0] * v[0] + v[1] - 11.0;
        double b = v[0] + v[1] * v[1] - 7.0;
        return a * a + b * b;
    };
    p.eval_grad = [](const Vec& v) {
        double a = v[0] * v[0] + v[1] - 11.0;
        double b = v[0] + v[1] * v[1] - 7.0;
        return Vec{4.0 * v[0] * a + 2.0 * b, 2.0 * a + 4.0 * v[1] * b};
    };
    return p;
}

inline Problem zakharov(int n) {
    Problem p;
    p.name = "zakharov" + std::to_string(n);
    p.dim = n;
    p.x0 = fill(n, 0.1);
    p.f_low = 0.0;
    auto lin = [](const Vec& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += 0.5 * static_cast<double>(i + 1) * x[i];
        return s;
    };
    p.eval_f = [lin](const Vec& x) {
        double s = lin(x);
        return dot(x, x) + s * s + s * s * s * s;
    };
    p.eval_grad = [lin](const Vec& x) {
        double s = lin(x);
        double c = 2.0 * s + 4.0 * s * s * s;
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            g[i] = 2.0 * x[i] + c * 0.5 * static_cast<double>(i + 1);
        return g;
    };
    return p;
}

/// Banded convex quadratic 0.5 x' T x with T = tridiag(-1, 2, -1).
/// Eigenvalues of T lie in (0, 4), so L = 4 is a valid Lipschitz constant.
inline Problem tridiag_quadratic(int n) {
    Problem p;
    p.name = "tridiag_quad" + std::to_string(n);
    p.dim = n;
    p.x0 = fill(n, 1.0);
    p.lipschitz_L = 4.0;
    p.f_low = 0.0;
    auto tx = [](const Vec& x) {
        std::size_t n = x.size();
        Vec t(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = 2.0 * x[i];
            if (i > 0) t[i] -= x[i - 1];
            if (i + 1 < n) t[i] -= x[i + 1];
        }
        return t;
    };
    p.eval_f = [tx](const Vec& x) { return 0.5 * dot(x, tx(x)); };
    p.eval_grad = [tx](const Vec& x) { return tx(x); };
    return p;
}

inline Problem sum_squares(int n) {
    Problem p;
    p.name = "sumsq" + std::to_string(n);
    p.dim = n;
    p.x0 = fill(n, 1.0);
    p.lipschitz_L = 2.0 * n;
    p.f_low = 0.0;
    p.eval_f = [](const Vec& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(i + 1) * x[i] * x[i];
        return s;
    };
    p.eval_grad = [](const Vec& x) {
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * static_cast<double>(i + 1) * x[i];
        return g;
    };
    return p;
}

inline Problem broyden_tridiagonal(int n) {
    Problem p;
    p.name = "broyden_tri" + std::to_string(n);
    p.dim = n;
    p.x0 = fill(n, -1.0);
    p.f_low = 0.0;
    auto residuals = [](const Vec& x) {
        std::size_t n = x.size();
        Vec f(n);
        for (std::size_t i = 0; i < n; ++i) {
            double xm = i > 0 ? x[i - 1] : 0.0;
            double xp = i + 1 < n ? x[i + 1] : 0.0;
            f[i] = (3.0 - 2.0 * x[i]) * x[i] - xm - 2.0 * xp + 1.0;
        }
        return f;
    };
    p.eval_f = [residuals](const Vec& x) {
        Vec f = residuals(x);
        return dot(f, f);
    };
    p.eval_grad = [residuals](const Vec& x) {
        std::size_t n = x.size();
        Vec f = residuals(x);
        Vec g(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] += 2.0 * f[i] * (3.0 - 4.0 * x[i]);
            if (i > 0) g[i - 1] += -2.0 * f[i];
            if (i + 1 < n) g[i + 1] += -4.0 * f[i];
        }
        return g;
    };
    return p;
}

inline Problem freudenstein_roth() {
    Problem p;
    p.name = "freudenstein_roth";
    p.dim = 2;
    p.x0 = {0.5, -2.0};
    p.f_low = 0.0;
    p.eval_f = [](const Vec& v) {
        double x = v[0], y = v[1];
        double a = -13.0 + x + ((5.0 - y) * y - 2.0) * y;
        double b = -29.0 + x + ((y + 1.0) * y - 14.0) * y;
        return a * a + b * b;
    };
    p.eval_grad = [](const Vec& v) {
        double x = v[0], y = v[1];
        double a = -13.0 + x + ((5.0 - y) * y - 2.0) * y;
        double b = -29.0 + x + ((y + 1.0) * y - 14.0) * y;
        double da = 10.0 * y - 3.0 * y * y - 2.0;
        double db = 3.0 * y * y + 2.0 * y - 14.0;
        return Vec{2.0 * a + 2.0 * b, 2.0 * a * da + 2.0 * b * db};
    };
    return p;
}

inline Problem wood() {
    Problem p;
    p.name = "wood";
    p.dim = 4;
    p.x0 = {-3.0, -1.0, -3.0, -1.0};
    p.f_low = 0.0;
    p.eval_f = [](const Vec& v) {
        double a = v[1] - v[0] * v[0];
        double b = 1.0 - v[0];
        double c = v[3] - v[2] * v[2];
        double d = 1.0 - v[2];
        double e = v[1] - 1.0, f = v[3] - 1.0;
        return 100.0 * a * a + b * b + 90.0 * c * c + d * d + 10.1 * (e * e + f * f) +
               19.8 * e * f;
    };
    p.eval_grad = [](const Vec& v) {
        double a = v[1] - v[0] * v[0];
        double c = v[3] - v[2] * v[2];
        double e = v[1] - 1.0, f = v[3] - 1.0;
        Vec g(4);
        g[0] = -400.0 * v[0] * a - 2.0 * (1.0 - v[0]);
        g[1] = 200.0 * a + 20.2 * e + 19.8 * f;
        g[2] = -360.0 * v[2] * c - 2.0 * (1.0 - v[2]);
        g[3] = 180.0 * c + 20.2 * f + 19.8 * e;
        return g;
    };
    return p;
}

} // namespace detail

/// Desk-scale suite of unconstrained problems with analytic gradients.
/// Dimensions span 1 to 1000; the quadratics carry exact Lipschitz constants
/// and lower bounds for the complexity checks.
inline std::vector<Problem> registry() {
    using namespace detail;
    std::vector<Problem> out;
    out.push_back(diag_quadratic("quad1", 1, 1.0, {1.5}));
    out.push_back(diag_quadratic("quad10", 10, 1.0, fill(10, 1.0)));
    out.push_back(diag_quadratic("quad_ill100", 100, 100.0, fill(100, 1.0)));
    out.push_back(diag_quadratic("quad1000", 1000, 1.0, fill(1000, 1.0)));
    out.push_back(booth());
    out.push_back(matyas());
    out.push_back(tridiag_quadratic(10));
    out.push_back(sum_squares(20));
    out.push_back(rosenbrock("rosenbrock2", 2));
    out.push_back(rosenbrock("rosenbrock10", 10));
    out.push_back(rosenbrock("rosenbrock100", 100));
    out.push_back(rosenbrock("rosenbrock1000", 1000));
    out.push_back(beale());
    out.push_back(powell_singular("powell4", 4));
    out.push_back(powell_singular("powell20", 20));
    out.push_back(dixon_price(10));
    out.push_back(trigonometric(10));
    out.push_back(trigonometric(50));
    out.push_back(himmelblau());
    out.push_back(zakharov(10));
    out.push_back(detail::broyden_tridiagonal(50));
    out.push_back(freudenstein_roth());
    out.push_back(wood());
    return out;
}

inline Problem find(const std::string& name) {
    for (auto& p : registry())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown problem: " + name);
}

inline bool known(const std::string& name) {
    for (auto& p : registry())
        if (p.name == name) return true;
    return false;
}

} // namespace restartls::testbed
