#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "grasspack/blichfeldt.hpp"
#include "grasspack/packing.hpp"
#include "grasspack/subspace.hpp"
#include "grasspack/volume.hpp"

namespace grasspack {

// Randomized verification campaigns. Each runner draws everything from one
// seed, so campaigns are reproducible and can be rerun byte-identically from
// the CLI.

inline const std::vector<std::pair<int, int>>& default_isometry_combos() {
    static const std::vector<std::pair<int, int>> combos = {
        {1, 4}, {2, 6}, {3, 10}, {5, 20}};
    return combos;
}

struct IsometryReport {
    std::int64_t pairs = 0;
    // max over pairs of |d^2 - 0.5 ||Pi_p - Pi_q||^2| / k
    double max_isometry_error_over_k = 0.0;
    // max over planes of | ||Phi|| - sqrt(k(n-k)/n) |
    double max_embedding_norm_error = 0.0;
    // max over planes of | ||coords|| - ||Phi|| |
    double max_flatten_norm_error = 0.0;
    bool pass = false;
};

inline IsometryReport verify_isometry(
    std::int64_t pairs_per_combo, std::uint64_t seed,
    const std::vector<std::pair<int, int>>& combos = default_isometry_combos()) {
    IsometryReport rep;
    Rng rng(seed);
    for (const auto& [k, n] : combos) {
        const double r = embedding_radius(k, n);
        for (std::int64_t t = 0; t < pairs_per_combo; ++t) {
            const Subspace p = sample_uniform_subspace(n, k, rng);
            const Subspace q = sample_uniform_subspace(n, k, rng);
            const double dsq = chordal_distance_sq(p, q);
            const double proj_route =
                0.5 * (projection_matrix(p) - projection_matrix(q)).squaredNorm();
            rep.max_isometry_error_over_k = std::max(
                rep.max_isometry_error_over_k, std::abs(dsq - proj_route) / k);
            for (const Subspace* s : {&p, &q}) {
                const EmbeddedPoint e = embed(*s);
                rep.max_embedding_norm_error =
                    std::max(rep.max_embedding_norm_error,
                             std::abs(e.matrix.norm() - r));
                rep.max_flatten_norm_error =
                    std::max(rep.max_flatten_norm_error,
                             std::abs(e.coords.norm() - e.matrix.norm()));
            }
            ++rep.pairs;
        }
    }
    rep.pass = rep.max_isometry_error_over_k <= 1e-9 &&
               rep.max_embedding_norm_error <= 1e-10 &&
               rep.max_flatten_norm_error <= 1e-12;
    return rep;
}

struct DensityReport {
    std::int64_t trials = 0; // (code, z) evaluations
    double max_total_density = 0.0;
    double max_quadratic_lhs = -std::numeric_limits<double>::infinity();
    double max_reduced_violation = -std::numeric_limits<double>::infinity();
    bool pass = false;
};

// Random spherical codes (every third one sharpened by repulsion so some
// pairs sit exactly at the minimum distance) evaluated at random points plus
// the code points themselves.
inline DensityReport verify_density(int codes, int points_per_code,
                                    std::uint64_t seed) {
    DensityReport rep;
    Rng rng(seed);
    for (int c = 0; c < codes; ++c) {
        const int dim = static_cast<int>(rng.uniform_int(2, 20));
        const int target = static_cast<int>(rng.uniform_int(2, 50));
        const double dist_target = rng.uniform(0.3, 1.35);
        SphericalCode code =
            random_spherical_code(dim, target, dist_target, 400, rng);
        double delta_tilde = dist_target;
        if (c % 3 == 0) {
            code = repel_spherical_code(code, 150);
            delta_tilde = std::min(code.min_distance(), 1.35);
        }
        const DensityParams params =
            density_params(delta_tilde / std::sqrt(2.0), 1.0);

        auto run_point = [&](const Eigen::VectorXd& z) {
            const DensityEvaluation ev =
                evaluate_density(code, z, delta_tilde, params);
            rep.max_total_density = std::max(rep.max_total_density, ev.total_density);
            rep.max_quadratic_lhs = std::max(rep.max_quadratic_lhs, ev.quadratic_lhs);
            rep.max_reduced_violation =
                std::max(rep.max_reduced_violation, -ev.reduced_slack);
            ++rep.trials;
        };

        for (int t = 0; t < points_per_code; ++t) run_point(rng.unit_vector(dim));
        for (const auto& x : code.points()) run_point(x);
    }
    rep.pass = rep.max_total_density <= 1.0 + 1e-9 &&
               rep.max_quadratic_lhs <= 1e-9 && rep.max_reduced_violation <= 1e-9;
    return rep;
}

struct QuadraticReport {
    std::int64_t trials = 0;
    double max_quadratic_lhs = -std::numeric_limits<double>::infinity();
    bool pass = false;
};

// Direct stress of the quadratic packing inequality: clusters of separated
// points packed inside a cap around a random center.
inline QuadraticReport verify_quadratic(std::int64_t trials, std::uint64_t seed) {
    QuadraticReport rep;
    Rng rng(seed);
    while (rep.trials < trials) {
        const int dim = static_cast<int>(rng.uniform_int(2, 20));
        const double dist_target = rng.uniform(0.3, 1.35);
        const DensityParams params =
            density_params(dist_target / std::sqrt(2.0), 1.0);
        const Eigen::VectorXd z = rng.unit_vector(dim);
        const int want = static_cast<int>(rng.uniform_int(1, 12));

        std::vector<Eigen::VectorXd> cluster;
        int attempts = 0;
        while (static_cast<int>(cluster.size()) < want && attempts < 300) {
            ++attempts;
            Eigen::VectorXd cand =
                (z + 0.6 * params.cap_radius * rng.gaussian_vector(dim)).normalized();
            if ((cand - z).norm() > params.cap_radius) continue;
            bool ok = true;
            for (const auto& x : cluster)
                if ((x - cand).norm() < dist_target) {
                    ok = false;
                    break;
                }
            if (ok) cluster.push_back(std::move(cand));
        }
        if (cluster.empty()) continue;
        rep.max_quadratic_lhs =
            std::max(rep.max_quadratic_lhs,
                     quadratic_inequality_lhs(cluster, z, dist_target, params));
        ++rep.trials;
    }
    rep.pass = rep.max_quadratic_lhs <= 1e-9;
    return rep;
}

struct CountingReport {
    int codes = 0;
    int failures = 0;
    // min over codes of threshold - lhs (negative means a violation)
    double worst_margin = std::numeric_limits<double>::infinity();
    bool pass = false;
};

inline CountingReport verify_counting(int codes, std::int64_t samples_each,
                                      std::uint64_t seed, int threads = 1) {
    static const std::vector<std::pair<int, int>> combos = {{1, 4}, {2, 6}, {2, 8}};
    CountingReport rep;
    Rng rng(seed);
    for (int c = 0; c < codes; ++c) {
        const auto& [k, n] = combos[c % combos.size()];
        const int M = static_cast<int>(rng.uniform_int(1, 12));
        const Code code = random_code(M, k, n, rng);
        const CountingCheck chk =
            counting_bound_check(code, samples_each, rng.next_u64(), threads);
        rep.worst_margin = std::min(rep.worst_margin, chk.threshold - chk.lhs);
        if (!chk.pass) ++rep.failures;
        ++rep.codes;
    }
    rep.pass = rep.failures == 0;
    return rep;
}

} // namespace grasspack
