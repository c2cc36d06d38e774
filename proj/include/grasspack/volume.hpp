#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "grasspack/blichfeldt.hpp"
#include "grasspack/errors.hpp"
#include "grasspack/packing.hpp"
#include "grasspack/random.hpp"
#include "grasspack/subspace.hpp"

namespace grasspack {

// Unnormalized density of the principal angles between a fixed k-plane and a
// uniform random k-plane in R^n (valid on the narrow side 2k < n):
//   prod_i sin(theta_i)^(n-2k) * prod_{i<j} (sin^2 theta_i - sin^2 theta_j).
// The normalizing constant is deliberately left out; every mass computed in
// this module is an expectation over uniform planes, which carries the
// normalization implicitly.
inline double omega_unnormalized(const PrincipalAngles& angles, int k, int n) {
    if (2 * k >= n)
        throw DomainError("omega_unnormalized: requires k < n/2");
    if (angles.count() != k)
        throw DimensionMismatch("omega_unnormalized: angle count != k");
    double value = 1.0;
    for (int i = 0; i < k; ++i)
        value *= std::pow(std::sin(angles.theta(i)), double(n - 2 * k));
    for (int i = 0; i < k; ++i) {
        const double si = std::sin(angles.theta(i));
        for (int j = i + 1; j < k; ++j) {
            const double sj = std::sin(angles.theta(j));
            value *= si * si - sj * sj;
        }
    }
    return value;
}

struct VolumeEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    double rho = 0.0;
    int k = 0;
    int n = 0;
};

namespace detail {

struct MomentAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t count = 0;
};

// Runs `total` evaluations of fn(rng) split into fixed-size blocks, each
// block on its own substream, and merges the partial sums in block order.
// The result is byte-identical for any thread count.
inline MomentAccumulator accumulate_blocks(
    std::int64_t total, std::uint64_t seed, int threads,
    const std::function<double(Rng&)>& fn) {
    constexpr std::int64_t kBlock = 8192;
    const std::int64_t blocks = (total + kBlock - 1) / kBlock;
    std::vector<MomentAccumulator> partial(blocks);

    int workers = threads;
    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<int>(std::min<std::int64_t>(workers, blocks));

    std::atomic<std::int64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(b));
            MomentAccumulator acc;
            const std::int64_t lo = b * kBlock;
            const std::int64_t hi = std::min(total, lo + kBlock);
            for (std::int64_t i = lo; i < hi; ++i) {
                const double v = fn(rng);
                acc.sum += v;
                acc.sum_sq += v * v;
                ++acc.count;
            }
            partial[b] = acc;
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    MomentAccumulator merged;
    for (const auto& acc : partial) {
        merged.sum += acc.sum;
        merged.sum_sq += acc.sum_sq;
        merged.count += acc.count;
    }
    return merged;
}

inline VolumeEstimate estimate_from_moments(const MomentAccumulator& acc,
                                            double rho, int k, int n) {
    VolumeEstimate est;
    est.samples = acc.count;
    est.rho = rho;
    est.k = k;
    est.n = n;
    est.mean = acc.sum / double(acc.count);
    if (acc.count > 1) {
        const double var = std::max(
            0.0, (acc.sum_sq - acc.sum * acc.sum / double(acc.count)) /
                     double(acc.count - 1));
        est.std_error = std::sqrt(var / double(acc.count));
    }
    return est;
}

} // namespace detail

// Normalized density-weighted mass of the ball of radius params.rho around a
// fixed plane: the expectation of tau(distance to the fixed plane) over
// uniform random planes. Principal angles of a uniform plane against a fixed
// one follow the volume-form density, so no explicit normalization is needed.
inline VolumeEstimate estimate_mu_ball(const DensityParams& params, int k, int n,
                                       std::int64_t samples, std::uint64_t seed,
                                       int threads = 1) {
    if (samples < 100)
        throw DomainError("estimate_mu_ball: need at least 100 samples");
    if (k < 1 || 2 * k > n)
        throw DomainError("estimate_mu_ball: need 1 <= k <= n/2");
    detail::require_nondegenerate(params, "estimate_mu_ball");

    Eigen::MatrixXd anchor = Eigen::MatrixXd::Zero(k, n);
    for (int i = 0; i < k; ++i) anchor(i, i) = 1.0;
    const Subspace fixed(anchor);

    const auto acc = detail::accumulate_blocks(
        samples, seed, threads, [&](Rng& rng) {
            const Subspace q = sample_uniform_subspace(n, k, rng);
            return tau(chordal_distance(fixed, q), params);
        });
    return detail::estimate_from_moments(acc, params.rho, k, n);
}

struct ExponentTracePoint {
    int n = 0;
    std::int64_t samples = 0;
    double mu_hat = 0.0;
    double std_error = 0.0;
    double normalized_log = 0.0; // (1/(nk)) ln mu_hat
    bool sufficient = false;     // mu_hat > 0
};

// Single row of the growth-exponent trace at one value of n. rho is scaled
// as ratio * r(n) so that the normalized log tends to ln(ratio) as n grows.
inline ExponentTracePoint exponent_trace_point(double ratio, int k, int n,
                                               std::int64_t samples,
                                               std::uint64_t seed,
                                               int threads = 1) {
    if (!(ratio > 0.0) || !(ratio < 1.0))
        throw DomainError("exponent_trace_point: ratio must be in (0, 1)");
    if (n <= 2 * k)
        throw DomainError("exponent_trace_point: need n > 2k");
    const double r = embedding_radius(k, n);
    const DensityParams params = density_params_for_rho(ratio * r, r);
    const VolumeEstimate est = estimate_mu_ball(params, k, n, samples, seed, threads);
    ExponentTracePoint pt;
    pt.n = n;
    pt.samples = est.samples;
    pt.mu_hat = est.mean;
    pt.std_error = est.std_error;
    pt.sufficient = est.mean > 0.0;
    pt.normalized_log = pt.sufficient
                            ? std::log(est.mean) / (double(n) * double(k))
                            : -std::numeric_limits<double>::infinity();
    return pt;
}

// Trace of the normalized log mass over a list of ambient dimensions.
// Throws InsufficientSamples if any estimate comes out empty.
inline std::vector<ExponentTracePoint> growth_exponent_trace(
    double ratio, int k, const std::vector<int>& n_list, std::int64_t samples,
    std::uint64_t seed, int threads = 1) {
    std::vector<ExponentTracePoint> out;
    out.reserve(n_list.size());
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        ExponentTracePoint pt = exponent_trace_point(
            ratio, k, n_list[i], samples, seed + i, threads);
        if (!pt.sufficient)
            throw InsufficientSamples(
                "growth_exponent_trace: ball missed by every sample at n=" +
                std::to_string(n_list[i]));
        out.push_back(pt);
    }
    return out;
}

// Counting-bound check M * mu(B_rho) <= 1 for a code, at the effective
// distance min(code distance, 0.99 r). Any distance not above the code's own
// minimum keeps the density construction valid, so clamping below r only
// weakens nothing; it keeps the cap angle away from the degenerate pi/2 for
// codes whose distance exceeds the embedding radius (single-plane codes have
// min distance +inf and fall out the same way).
struct CountingCheck {
    int M = 0;
    int k = 0;
    int n = 0;
    double min_distance = 0.0;
    double delta_used = 0.0;
    double rho = 0.0;
    double mu_hat = 0.0;
    double std_error = 0.0;
    double lhs = 0.0;       // M * mu_hat
    double threshold = 0.0; // 1 + 3 M stderr
    bool pass = false;
};

inline CountingCheck counting_bound_check(const Code& code, std::int64_t samples,
                                          std::uint64_t seed, int threads = 1) {
    CountingCheck chk;
    chk.M = code.size();
    chk.k = code.k();
    chk.n = code.n();
    chk.min_distance = code.min_distance();
    const double r = embedding_radius(chk.k, chk.n);
    chk.delta_used = std::min(chk.min_distance, 0.99 * r);
    const DensityParams params = density_params(chk.delta_used, r);
    const VolumeEstimate est =
        estimate_mu_ball(params, chk.k, chk.n, samples, seed, threads);
    chk.rho = params.rho;
    chk.mu_hat = est.mean;
    chk.std_error = est.std_error;
    chk.lhs = double(chk.M) * est.mean;
    chk.threshold = 1.0 + 3.0 * double(chk.M) * est.std_error;
    chk.pass = chk.lhs <= chk.threshold;
    return chk;
}

} // namespace grasspack
