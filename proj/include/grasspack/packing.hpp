#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "grasspack/bounds.hpp"
#include "grasspack/errors.hpp"
#include "grasspack/random.hpp"
#include "grasspack/subspace.hpp"

namespace grasspack {

// A finite set of k-planes in R^n with cached minimum pairwise chordal
// distance. A single-plane code reports +infinity (serialized as "inf").
class Code {
public:
    explicit Code(std::vector<Subspace> planes) : planes_(std::move(planes)) {
        if (planes_.empty()) throw DomainError("Code: need at least one plane");
        for (const auto& p : planes_)
            if (p.k() != planes_[0].k() || p.n() != planes_[0].n())
                throw DimensionMismatch("Code: planes have mixed (k, n)");
        min_distance_ = recompute_min_distance();
    }

    int size() const { return static_cast<int>(planes_.size()); }
    int k() const { return planes_[0].k(); }
    int n() const { return planes_[0].n(); }
    const std::vector<Subspace>& planes() const { return planes_; }
    double min_distance() const { return min_distance_; }

    double recompute_min_distance() const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < planes_.size(); ++i)
            for (std::size_t j = i + 1; j < planes_.size(); ++j)
                best = std::min(best, chordal_distance(planes_[i], planes_[j]));
        return best;
    }

private:
    std::vector<Subspace> planes_;
    double min_distance_ = 0.0;
};

// Uniform plane w.r.t. the invariant measure: orthonormalization of a k x n
// matrix of independent standard normal entries.
inline Subspace sample_uniform_subspace(int n, int k, Rng& rng,
                                        bool allow_wide = false) {
    if (k < 1 || k > n)
        throw DimensionError("sample_uniform_subspace: need 1 <= k <= n");
    if (!allow_wide && 2 * k > n)
        throw DimensionError("sample_uniform_subspace: 2k > n requires allow_wide");
    for (;;) {
        try {
            return orthonormalize(rng.gaussian_matrix(k, n), allow_wide);
        } catch (const RankDeficient&) {
            // probability zero; draw again
        }
    }
}

inline Code random_code(int M, int k, int n, Rng& rng) {
    if (M < 1) throw DomainError("random_code: M must be >= 1");
    std::vector<Subspace> planes;
    planes.reserve(M);
    for (int i = 0; i < M; ++i) planes.push_back(sample_uniform_subspace(n, k, rng));
    return Code(std::move(planes));
}

// Keeps sampling uniform planes, accepting those at distance >= delta from
// everything kept so far; stops after max_trials consecutive rejections.
inline Code greedy_packing(double delta, int k, int n, int max_trials, Rng& rng) {
    if (!(delta > 0.0) || delta >= std::sqrt(double(k)))
        throw DomainError("greedy_packing: need 0 < delta < sqrt(k)");
    std::vector<Subspace> planes;
    planes.push_back(sample_uniform_subspace(n, k, rng));
    int rejections = 0;
    while (rejections < max_trials) {
        Subspace cand = sample_uniform_subspace(n, k, rng);
        bool ok = true;
        for (const auto& p : planes)
            if (chordal_distance(p, cand) < delta) {
                ok = false;
                break;
            }
        if (ok) {
            planes.push_back(std::move(cand));
            rejections = 0;
        } else {
            ++rejections;
        }
    }
    return Code(std::move(planes));
}

struct OptimizeOptions {
    int iterations = 2000;
    double initial_step = 0.1;
    // Initial temperature of the soft minimum over pairwise squared
    // distances; annealed geometrically to 1e-4 of itself.
    double smoothing = 0.25;
};

struct OptimizeResult {
    Code code;
    bool converged = false;
    int iterations_run = 0;
};

namespace detail {

inline double soft_min_objective(const std::vector<Eigen::MatrixXd>& bases,
                                 double temperature, int k) {
    // -T log sum exp(-d^2/T), stabilized around the hard minimum.
    double dmin = std::numeric_limits<double>::infinity();
    std::vector<double> dsq;
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j) {
            const double d =
                std::max(0.0, double(k) - (bases[i] * bases[j].transpose()).squaredNorm());
            dsq.push_back(d);
            dmin = std::min(dmin, d);
        }
    double acc = 0.0;
    for (double d : dsq) acc += std::exp(-(d - dmin) / temperature);
    return dmin - temperature * std::log(acc);
}

inline double hard_min_distance_sq(const std::vector<Eigen::MatrixXd>& bases,
                                   int k) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j)
            dmin = std::min(dmin, std::max(0.0, double(k) -
                                                    (bases[i] * bases[j].transpose())
                                                        .squaredNorm()));
    return dmin;
}

inline Eigen::MatrixXd reorthonormalize_rows(Eigen::MatrixXd b) {
    const int k = static_cast<int>(b.rows());
    for (int i = 0; i < k; ++i) {
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < i; ++j)
                b.row(i) -= b.row(i).dot(b.row(j)) * b.row(j);
        b.row(i) /= b.row(i).norm();
    }
    return b;
}

} // namespace detail

// Ascends a soft minimum of the pairwise squared chordal distances (log-sum-
// exp with annealed temperature) with an adaptive step and row
// re-orthonormalization after every move. The best iterate by hard minimum
// distance is kept, so the result is never worse than the input.
inline OptimizeResult optimize_code(const Code& code, OptimizeOptions opt) {
    if (code.size() < 2) throw DomainError("optimize_code: M must be >= 2");
    if (opt.iterations < 1 || !(opt.initial_step > 0.0) || !(opt.smoothing > 0.0))
        throw DomainError("optimize_code: bad options");
    const int m = code.size();
    const int k = code.k();

    std::vector<Eigen::MatrixXd> bases;
    bases.reserve(m);
    for (const auto& p : code.planes()) bases.push_back(p.basis());

    std::vector<Eigen::MatrixXd> best = bases;
    double best_hard = detail::hard_min_distance_sq(bases, k);
    double step = opt.initial_step;
    const double t_end = opt.smoothing * 1e-4;
    int last_improvement = 0;
    bool stalled = false;

    double temperature = opt.smoothing;
    double current = detail::soft_min_objective(bases, temperature, k);
    int it = 0;
    for (; it < opt.iterations; ++it) {
        temperature = opt.smoothing *
                      std::pow(t_end / opt.smoothing,
                               double(it) / double(std::max(1, opt.iterations - 1)));
        current = detail::soft_min_objective(bases, temperature, k);

        // Softmax weights over pairs, concentrated on the closest ones.
        double dmin = std::numeric_limits<double>::infinity();
        std::vector<std::vector<double>> dsq(m, std::vector<double>(m, 0.0));
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                dsq[i][j] = std::max(
                    0.0, double(k) - (bases[i] * bases[j].transpose()).squaredNorm());
                dmin = std::min(dmin, dsq[i][j]);
            }
        double wsum = 0.0;
        std::vector<Eigen::MatrixXd> grad(m,
                                          Eigen::MatrixXd::Zero(k, code.n()));
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                const double w = std::exp(-(dsq[i][j] - dmin) / temperature);
                wsum += w;
                const Eigen::MatrixXd overlap = bases[i] * bases[j].transpose();
                grad[i] -= 2.0 * w * overlap * bases[j];
                grad[j] -= 2.0 * w * overlap.transpose() * bases[i];
            }

        bool accepted = false;
        for (int backtrack = 0; backtrack < 20 && !accepted; ++backtrack) {
            std::vector<Eigen::MatrixXd> trial(m);
            for (int i = 0; i < m; ++i)
                trial[i] =
                    detail::reorthonormalize_rows(bases[i] + (step / wsum) * grad[i]);
            const double value = detail::soft_min_objective(trial, temperature, k);
            if (value > current) {
                bases = std::move(trial);
                current = value;
                step = std::min(step * 1.2, 10.0);
                accepted = true;
            } else {
                step *= 0.4;
                if (step < 1e-16) break;
            }
        }

        const double hard = detail::hard_min_distance_sq(bases, k);
        if (hard > best_hard) {
            if (hard > best_hard + std::max(1e-12, 1e-9 * best_hard))
                last_improvement = it;
            best_hard = hard;
            best = bases;
        }
        if (!accepted && step < 1e-16) {
            stalled = true; // no ascent direction improves the soft objective
            break;
        }
    }

    std::vector<Subspace> planes;
    planes.reserve(m);
    for (auto& b : best) planes.emplace_back(detail::reorthonormalize_rows(b),
                                             /*allow_wide=*/2 * k > code.n());
    const bool converged =
        stalled || (it - last_improvement) > std::max(50, opt.iterations / 4);
    return OptimizeResult{Code(std::move(planes)), converged, it};
}

inline OptimizeResult optimize_code(const Code& code, int iterations,
                                    double initial_step, double smoothing) {
    return optimize_code(code, OptimizeOptions{iterations, initial_step, smoothing});
}

// Achieved distance of a code against the finite-size Rankin bound, plus the
// empirical rate ln(M)/n next to the asymptotic curves at the achieved
// distance. The curve comparison is advisory at finite n.
struct BoundReport {
    int M = 0;
    int k = 0;
    int n = 0;
    double min_distance = 0.0; // +inf for M == 1
    double achieved_delta_sq = 0.0;
    std::optional<double> rankin_delta_sq;
    std::optional<double> gap;
    double empirical_rate = 0.0;
    std::optional<RatePoint> asymptotic_rates;
};

inline BoundReport bound_report(const Code& code) {
    BoundReport rep;
    rep.M = code.size();
    rep.k = code.k();
    rep.n = code.n();
    rep.min_distance = code.min_distance();
    rep.empirical_rate = std::log(double(rep.M)) / double(rep.n);
    if (rep.M >= 2) {
        rep.achieved_delta_sq = rep.min_distance * rep.min_distance;
        rep.rankin_delta_sq = rankin_sq_bound(rep.M, rep.k, rep.n);
        rep.gap = *rep.rankin_delta_sq - rep.achieved_delta_sq;
        const double delta =
            std::min(rep.min_distance, std::sqrt(double(rep.k)));
        if (delta > 0.0) rep.asymptotic_rates = rate_point(delta, rep.k);
    } else {
        rep.achieved_delta_sq = std::numeric_limits<double>::infinity();
    }
    return rep;
}

} // namespace grasspack
