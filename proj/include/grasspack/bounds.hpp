#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "grasspack/errors.hpp"

namespace grasspack {

// Asymptotic rate bounds for codes in the Grassmannian under the chordal
// metric, in nats per ambient dimension, as functions of the code distance
// delta in (0, sqrt(k)]. rate_gv is the random-coding lower bound; the other
// three are upper bounds (sphere-packing, linear-programming, and the
// Rankin-type refinement of the sphere-packing bound).

namespace detail {

inline void check_rate_domain(double delta, int k, const char* where) {
    if (k < 1) throw DomainError(std::string(where) + ": k must be >= 1");
    const double top = std::sqrt(double(k));
    if (!(delta > 0.0) || delta > top * (1.0 + 1e-12))
        throw DomainError(std::string(where) + ": delta must lie in (0, sqrt(k)]");
}

} // namespace detail

inline double rate_gv(double delta, int k) {
    detail::check_rate_domain(delta, k, "rate_gv");
    return -double(k) * std::log(delta / std::sqrt(double(k)));
}

inline double rate_hamming(double delta, int k) {
    detail::check_rate_domain(delta, k, "rate_hamming");
    const double inner = std::max(0.0, 1.0 - delta * delta / (2.0 * k));
    return -double(k) * std::log(std::sqrt(1.0 - std::sqrt(inner)));
}

// s log s extends continuously by 0 at s = 0, which makes the bound vanish
// at delta = sqrt(k).
inline double rate_lp(double delta, int k) {
    detail::check_rate_domain(delta, k, "rate_lp");
    const double s =
        std::max(0.0, (double(k) / 2.0) * (std::sqrt(double(k)) / delta - 1.0));
    const double slogs = s > 0.0 ? s * std::log(s) : 0.0;
    return double(k) * ((1.0 + s) * std::log1p(s) - slogs);
}

inline double rate_rankin(double delta, int k) {
    detail::check_rate_domain(delta, k, "rate_rankin");
    const double inner = std::max(0.0, 1.0 - delta * delta / double(k));
    return -double(k) * std::log(std::sqrt(1.0 - std::sqrt(inner)));
}

// Finite-size bound on the squared chordal distance of an (M, delta) code of
// k-planes in R^n: simplex branch for M <= n(n+1)/2, orthoplex branch above.
// Tight for the known small optimal configurations.
inline double rankin_sq_bound(std::int64_t M, int k, int n) {
    if (M < 2) throw DomainError("rankin_sq_bound: M must be >= 2");
    if (k < 1 || k >= n) throw DomainError("rankin_sq_bound: need 1 <= k < n");
    const double base = double(k) * double(n - k) / double(n);
    const double cap = double(n) * double(n + 1) / 2.0;
    if (double(M) <= cap) return base * double(M) / double(M - 1);
    return base;
}

struct RatePoint {
    double delta = 0.0;
    double r_gv = 0.0;
    double r_rankin = 0.0;
    double r_lp = 0.0;
    double r_hamming = 0.0;
};

inline RatePoint rate_point(double delta, int k) {
    return RatePoint{delta, rate_gv(delta, k), rate_rankin(delta, k),
                     rate_lp(delta, k), rate_hamming(delta, k)};
}

inline std::vector<RatePoint> emit_rate_table(int k,
                                              const std::vector<double>& grid) {
    std::vector<RatePoint> out;
    out.reserve(grid.size());
    for (double d : grid) out.push_back(rate_point(d, k));
    return out;
}

namespace detail {

// Scan grid for crossover root finders: 512 points sweeping delta upward
// toward sqrt(k) with geometrically shrinking gap, so crossings that sit
// within 1e-3 of sqrt(k) (they do for large k) still get bracketed.
inline std::vector<double> crossover_scan_grid(int k) {
    const int points = 512;
    const double top = std::sqrt(double(k));
    const double gap0 = 0.9 * top;
    const double gap1 = 1e-7 * top;
    const double shrink = std::pow(gap1 / gap0, 1.0 / double(points - 1));
    std::vector<double> grid(points);
    double gap = gap0;
    for (int i = 0; i < points; ++i) {
        grid[i] = top - gap;
        gap *= shrink;
    }
    return grid;
}

inline double bisect(const std::function<double(double)>& f, double lo,
                     double hi, double flo, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double crossover_root(const std::function<double(double)>& f, int k,
                             const char* where) {
    if (k < 2) throw DomainError(std::string(where) + ": k must be >= 2");
    const std::vector<double> grid = crossover_scan_grid(k);
    double prev = f(grid[0]);
    if (prev == 0.0) return grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]);
        if (cur == 0.0) return grid[i];
        if ((prev < 0.0) != (cur < 0.0))
            return bisect(f, grid[i - 1], grid[i], prev, 1e-6);
        prev = cur;
    }
    throw NoRoot(std::string(where) + ": no sign change on the scan grid");
}

} // namespace detail

// Distance at which the Rankin-type rate bound and the LP rate bound cross;
// below it the LP curve is higher, above it the Rankin-type curve takes over.
inline double crossover_delta_star(int k) {
    return detail::crossover_root(
        [k](double d) { return rate_rankin(d, k) - rate_lp(d, k); }, k,
        "crossover_delta_star");
}

// Distance at which the LP bound crosses the sphere-packing bound.
inline double crossover_lp_hamming(int k) {
    return detail::crossover_root(
        [k](double d) { return rate_lp(d, k) - rate_hamming(d, k); }, k,
        "crossover_lp_hamming");
}

} // namespace grasspack
