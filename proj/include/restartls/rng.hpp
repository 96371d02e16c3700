#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "restartls/vec.hpp"

namespace restartls {

// 64-bit FNV-1a. Used to derive per-run seeds from stable keys so that
// results never depend on execution order.
inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t len,
                                   std::uint64_t h = 0xcbf29ce484222325ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
    return fnv1a64_bytes(s.data(), s.size(), h);
}

inline std::uint64_t fnv1a64_u64(std::uint64_t v, std::uint64_t h = 0xcbf29ce484222325ull) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    return fnv1a64_bytes(b, 8, h);
}

/// Stable per-run seed from (master seed, problem, method, noise level, replicate).
inline std::uint64_t derive_run_seed(std::uint64_t master_seed, std::string_view problem,
                                     std::string_view method, double eps_f,
                                     long long replicate) {
    std::uint64_t h = fnv1a64_u64(master_seed);
    h = fnv1a64(problem, h);
    h = fnv1a64("|", h);
    h = fnv1a64(method, h);
    h = fnv1a64("|", h);
    h = fnv1a64_u64(std::bit_cast<std::uint64_t>(eps_f), h);
    h = fnv1a64_u64(static_cast<std::uint64_t>(replicate), h);
    return h;
}

// Deterministic draws on top of std::mt19937_64. The engine is pinned by the
// standard; the float mappings are done by hand because the standard library
// distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller, pair-cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01(); // (0, 1], keeps the log finite
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Uniform draw from the closed Euclidean ball of the given radius:
    /// direction uniform on the sphere, radius scaled by U^(1/n).
    Vec ball(std::size_t n, double radius) {
        Vec e(n, 0.0);
        if (n == 0 || radius <= 0.0) return e;
        double nrm = 0.0;
        do {
            for (std::size_t i = 0; i < n; ++i) e[i] = normal();
            nrm = norm2(e);
        } while (nrm == 0.0);
        double r = radius * std::pow(uniform01(), 1.0 / static_cast<double>(n));
        double c = r / nrm;
        for (std::size_t i = 0; i < n; ++i) e[i] *= c;
        return e;
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace restartls
