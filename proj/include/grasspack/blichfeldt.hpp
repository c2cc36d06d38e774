#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "grasspack/errors.hpp"
#include "grasspack/random.hpp"

namespace grasspack {

// Density-method parameter chain. Starting from a code distance delta on a
// sphere of radius r (the embedding sphere), derive:
//   alpha : half the angular distance of the embedded code,
//           delta = sqrt(2) r sin(alpha)
//   beta  : cap angle, sin(beta) = sqrt(2) sin(alpha)
//   rho   : extended ball radius back on the Grassmannian,
//           rho = sqrt(2) r sin(beta/2) = r sqrt(1 - sqrt(1 - delta^2/r^2))
//   cap_radius : linear radius of the cap on the unit sphere, 2 sin(beta/2)
struct DensityParams {
    double delta = 0.0;
    double r = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double rho = 0.0;
    double cap_radius = 0.0;
};

inline DensityParams density_params(double delta, double r) {
    if (!(r > 0.0)) throw DomainError("density_params: r must be positive");
    if (!(delta > 0.0) || delta > r * (1.0 + 1e-15))
        throw DomainError(
            "density_params: need 0 < delta <= r (cap angle would pass pi/2)");
    DensityParams p;
    p.delta = delta;
    p.r = r;
    p.alpha = std::asin(std::min(1.0, delta / (std::sqrt(2.0) * r)));
    p.beta = std::asin(std::min(1.0, delta / r));
    p.rho = std::sqrt(2.0) * r * std::sin(p.beta / 2.0);
    p.cap_radius = 2.0 * std::sin(p.beta / 2.0);
    return p;
}

// Inverse map rho -> delta: delta^2 = rho^2 (2 - rho^2 / r^2).
inline DensityParams density_params_for_rho(double rho, double r) {
    if (!(r > 0.0)) throw DomainError("density_params_for_rho: r must be positive");
    if (!(rho > 0.0) || rho > r * (1.0 + 1e-15))
        throw DomainError("density_params_for_rho: need 0 < rho <= r");
    const double c = std::min(1.0, rho / r);
    return density_params(rho * std::sqrt(2.0 - c * c), r);
}

// beta == pi/2 makes cos(beta) = 0 and both densities vanish identically;
// callers must treat that case explicitly.
inline bool degenerate_beta(const DensityParams& p) {
    return std::cos(p.beta) < 1e-12;
}

namespace detail {

inline void require_nondegenerate(const DensityParams& p, const char* where) {
    if (degenerate_beta(p))
        throw DegenerateBeta(std::string(where) +
                             ": beta = pi/2, density vanishes identically");
}

} // namespace detail

// Density on the Grassmannian ball of radius rho around a code point, as a
// function of the distance d to the center.
inline double tau(double d, const DensityParams& p) {
    detail::require_nondegenerate(p, "tau");
    if (d < 0.0) throw DomainError("tau: d must be >= 0");
    if (d > p.rho) return 0.0;
    const double sin_beta = std::sin(p.beta);
    return 2.0 * std::cos(p.beta) / (p.r * p.r * sin_beta * sin_beta) *
           (p.rho * p.rho - d * d);
}

// Induced density on the unit-sphere cap, as a function of the Euclidean
// distance s to the cap center. sigma(sqrt(2) d / r) == tau(d).
inline double sigma(double s, const DensityParams& p) {
    detail::require_nondegenerate(p, "sigma");
    if (s < 0.0) throw DomainError("sigma: s must be >= 0");
    if (s > p.cap_radius) return 0.0;
    const double sin_beta = std::sin(p.beta);
    return std::cos(p.beta) / (sin_beta * sin_beta) *
           (p.cap_radius * p.cap_radius - s * s);
}

// A finite set of unit vectors with cached minimum pairwise Euclidean
// distance. Points are renormalized on construction; the cache always equals
// the recomputed pairwise minimum.
class SphericalCode {
public:
    explicit SphericalCode(std::vector<Eigen::VectorXd> points)
        : points_(std::move(points)) {
        if (points_.empty())
            throw DomainError("SphericalCode: need at least one point");
        dimension_ = static_cast<int>(points_[0].size());
        for (auto& x : points_) {
            if (static_cast<int>(x.size()) != dimension_)
                throw DimensionMismatch("SphericalCode: mixed dimensions");
            const double norm = x.norm();
            if (norm < 1e-12)
                throw DomainError("SphericalCode: zero point cannot be normalized");
            x /= norm;
        }
        min_distance_ = recompute_min_distance();
    }

    int dimension() const { return dimension_; }
    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<Eigen::VectorXd>& points() const { return points_; }
    double min_distance() const { return min_distance_; }

    double recompute_min_distance() const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j)
                best = std::min(best, (points_[i] - points_[j]).norm());
        return best;
    }

private:
    int dimension_ = 0;
    std::vector<Eigen::VectorXd> points_;
    double min_distance_ = 0.0;
};

// Sum of cap densities seen at z. The density method guarantees the result
// never exceeds 1 when the code's minimum distance is at least 2 sin(alpha).
inline double total_density(const SphericalCode& code, const Eigen::VectorXd& z,
                            const DensityParams& p) {
    if (static_cast<int>(z.size()) != code.dimension())
        throw DimensionMismatch("total_density: z has wrong dimension");
    if (std::abs(z.norm() - 1.0) > 1e-9)
        throw PreconditionViolation("total_density: z must be a unit vector");
    double sum = 0.0;
    for (const auto& x : code.points()) sum += sigma((x - z).norm(), p);
    return sum;
}

// Left-hand side of the quadratic packing inequality for the points of a
// code that fall inside the cap around z:
//   (sum d_j^2)^2 - 4 m sum d_j^2 + 2 m (m-1) delta_tilde^2  <=  0.
inline double quadratic_inequality_lhs(
    const std::vector<Eigen::VectorXd>& points_near_z, const Eigen::VectorXd& z,
    double delta_tilde, const DensityParams& p) {
    const std::size_t m = points_near_z.size();
    double sum_dsq = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double d = (points_near_z[j] - z).norm();
        if (d > p.cap_radius * (1.0 + 1e-12))
            throw PreconditionViolation(
                "quadratic_inequality_lhs: point outside the cap");
        sum_dsq += d * d;
        for (std::size_t l = j + 1; l < m; ++l)
            if ((points_near_z[j] - points_near_z[l]).norm() <
                delta_tilde * (1.0 - 1e-12))
                throw PreconditionViolation(
                    "quadratic_inequality_lhs: pair closer than delta_tilde");
    }
    const double dm = static_cast<double>(m);
    return sum_dsq * sum_dsq - 4.0 * dm * sum_dsq +
           2.0 * dm * (dm - 1.0) * delta_tilde * delta_tilde;
}

// One pass over a (code, z) pair: total density, the cap point count m, the
// quadratic inequality value for the in-cap points, and the slack of the
// reduced form 4m(1 - a) - a^2 tan^2(beta) >= 0 where a is the total density.
struct DensityEvaluation {
    double total_density = 0.0;
    int near_points = 0;
    double quadratic_lhs = 0.0;
    double reduced_slack = 0.0;
};

inline DensityEvaluation evaluate_density(const SphericalCode& code,
                                          const Eigen::VectorXd& z,
                                          double delta_tilde,
                                          const DensityParams& p) {
    if (static_cast<int>(z.size()) != code.dimension())
        throw DimensionMismatch("evaluate_density: z has wrong dimension");
    DensityEvaluation ev;
    std::vector<Eigen::VectorXd> near;
    for (const auto& x : code.points()) {
        const double d = (x - z).norm();
        if (d <= p.cap_radius) {
            near.push_back(x);
            ev.total_density += sigma(d, p);
        }
    }
    ev.near_points = static_cast<int>(near.size());
    ev.quadratic_lhs = near.empty()
                           ? 0.0
                           : quadratic_inequality_lhs(near, z, delta_tilde, p);
    const double a = ev.total_density;
    const double t = std::tan(p.beta);
    ev.reduced_slack = 4.0 * ev.near_points * (1.0 - a) - a * a * t * t;
    return ev;
}

// Greedy rejection construction of a spherical code with pairwise distance
// at least min_dist. Stops after max_attempts consecutive rejections; the
// result may be smaller than the requested size.
inline SphericalCode random_spherical_code(int dimension, int target_size,
                                           double min_dist, int max_attempts,
                                           Rng& rng) {
    if (dimension < 1) throw DomainError("random_spherical_code: dimension >= 1");
    if (target_size < 1) throw DomainError("random_spherical_code: size >= 1");
    std::vector<Eigen::VectorXd> pts;
    pts.push_back(rng.unit_vector(dimension));
    int rejections = 0;
    while (static_cast<int>(pts.size()) < target_size &&
           rejections < max_attempts) {
        Eigen::VectorXd cand = rng.unit_vector(dimension);
        bool ok = true;
        for (const auto& x : pts)
            if ((x - cand).norm() < min_dist) {
                ok = false;
                break;
            }
        if (ok) {
            pts.push_back(std::move(cand));
            rejections = 0;
        } else {
            ++rejections;
        }
    }
    return SphericalCode(std::move(pts));
}

// Pushes the points of a spherical code apart by ascending a soft minimum of
// the pairwise squared distances, renormalizing after every step. Used to
// build near-equality configurations for density verification.
inline SphericalCode repel_spherical_code(const SphericalCode& code,
                                          int iterations, double step = 0.05) {
    const int m = code.size();
    if (m < 2 || iterations <= 0) return code;
    std::vector<Eigen::VectorXd> pts = code.points();
    std::vector<Eigen::VectorXd> best = pts;
    double best_min = code.min_distance();
    double temperature = 0.5;
    for (int it = 0; it < iterations; ++it) {
        std::vector<Eigen::VectorXd> grad(m, Eigen::VectorXd::Zero(code.dimension()));
        double dmin_sq = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                dmin_sq = std::min(dmin_sq, (pts[i] - pts[j]).squaredNorm());
        double wsum = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                const Eigen::VectorXd diff = pts[i] - pts[j];
                const double w =
                    std::exp(-(diff.squaredNorm() - dmin_sq) / temperature);
                wsum += w;
                grad[i] += 2.0 * w * diff;
                grad[j] -= 2.0 * w * diff;
            }
        for (int i = 0; i < m; ++i) {
            pts[i] += (step / wsum) * grad[i];
            pts[i].normalize();
        }
        double cur = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                cur = std::min(cur, (pts[i] - pts[j]).norm());
        if (cur > best_min) {
            best_min = cur;
            best = pts;
        }
        temperature = std::max(1e-3, temperature * 0.995);
    }
    return SphericalCode(std::move(best));
}

} // namespace grasspack
