#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "grasspack/errors.hpp"

namespace grasspack {

// Per-entry tolerance for B * B^T == I on construction.
inline constexpr double kOrthonormalityTol = 1e-12;
// Two subspaces closer than this (chordal) are considered the same plane.
inline constexpr double kPlaneEqualityTol = 1e-8;

// Radius of the sphere carrying the traceless-projector embedding of k-planes
// in R^n.
inline double embedding_radius(int k, int n) {
    return std::sqrt(double(k) * double(n - k) / double(n));
}

// A k-plane through the origin of R^n, stored as a k x n generator matrix
// with orthonormal rows. Immutable after construction. The default policy
// requires 2k <= n; wider planes need allow_wide (the volume machinery is
// only valid on the narrow side).
class Subspace {
public:
    explicit Subspace(Eigen::MatrixXd basis, bool allow_wide = false)
        : basis_(std::move(basis)) {
        const int k = static_cast<int>(basis_.rows());
        const int n = static_cast<int>(basis_.cols());
        if (k < 1 || n < 1 || k > n)
            throw DimensionError("Subspace: need 1 <= k <= n, got k=" +
                                 std::to_string(k) + " n=" + std::to_string(n));
        if (!allow_wide && 2 * k > n)
            throw DimensionError("Subspace: 2k > n requires allow_wide");
        const Eigen::MatrixXd gram = basis_ * basis_.transpose();
        const double dev =
            (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
        if (dev > kOrthonormalityTol)
            throw PreconditionViolation(
                "Subspace: rows not orthonormal (max deviation " +
                std::to_string(dev) + "); use orthonormalize()");
    }

    int k() const { return static_cast<int>(basis_.rows()); }
    int n() const { return static_cast<int>(basis_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }

private:
    Eigen::MatrixXd basis_;
};

// Principal angles between two k-planes, sorted non-increasing, each in
// [0, pi/2].
struct PrincipalAngles {
    Eigen::VectorXd theta;

    int count() const { return static_cast<int>(theta.size()); }
};

// Image of a plane under the traceless-projector embedding. `matrix` is the
// n x n symmetric traceless matrix; `coords` is an isometric flattening into
// R^{(n-1)(n+2)/2}: the trace-zero diagonal expressed in an orthonormal
// (Helmert) basis of the sum-zero hyperplane, followed by the strict upper
// triangle scaled by sqrt(2).
struct EmbeddedPoint {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd coords;
};

// Builds a Subspace from arbitrary spanning rows. Rows that are already
// orthonormal are kept verbatim; otherwise modified Gram-Schmidt with a
// re-orthogonalization pass. Rank is checked against the singular values
// first: smallest must exceed 1e-10 x largest.
inline Subspace orthonormalize(const Eigen::MatrixXd& rows,
                               bool allow_wide = false) {
    const int k = static_cast<int>(rows.rows());
    const int n = static_cast<int>(rows.cols());
    if (k < 1 || n < 1 || k > n)
        throw DimensionError("orthonormalize: need 1 <= k <= n, got k=" +
                             std::to_string(k) + " n=" + std::to_string(n));
    if (!allow_wide && 2 * k > n)
        throw DimensionError("orthonormalize: 2k > n requires allow_wide");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(k - 1) <= 1e-10 * sv(0))
        throw RankDeficient("orthonormalize: numerical rank below k");

    const Eigen::MatrixXd gram = rows * rows.transpose();
    if ((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() <=
        kOrthonormalityTol)
        return Subspace(rows, allow_wide);

    Eigen::MatrixXd b = rows;
    for (int i = 0; i < k; ++i) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < i; ++j)
                b.row(i) -= b.row(i).dot(b.row(j)) * b.row(j);
        }
        const double norm = b.row(i).norm();
        if (norm <= 1e-14)
            throw RankDeficient("orthonormalize: degenerate row " +
                                std::to_string(i));
        b.row(i) /= norm;
    }
    return Subspace(std::move(b), allow_wide);
}

namespace detail {

inline void require_compatible(const Subspace& p, const Subspace& q,
                               const char* where) {
    if (p.n() != q.n() || p.k() != q.k())
        throw DimensionMismatch(std::string(where) +
                                ": subspaces have different (k, n)");
}

} // namespace detail

// Cosines of the principal angles are the singular values of A_p A_q^T;
// values are clamped to [0, 1] before acos to absorb round-off at the ends.
inline PrincipalAngles principal_angles(const Subspace& p, const Subspace& q) {
    detail::require_compatible(p, q, "principal_angles");
    const Eigen::MatrixXd overlap = p.basis() * q.basis().transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(overlap);
    const Eigen::VectorXd& sv = svd.singularValues(); // non-increasing
    const int k = p.k();
    Eigen::VectorXd theta(k);
    for (int i = 0; i < k; ++i) {
        const double c = std::clamp(sv(i), 0.0, 1.0);
        theta(k - 1 - i) = std::acos(c); // reverse: angles non-increasing
    }
    return PrincipalAngles{std::move(theta)};
}

// ||sin theta||^2 = k - ||A_p A_q^T||_F^2. The Frobenius norm is accumulated
// pairing (i,j) with (j,i), so swapping the arguments transposes the overlap
// matrix without changing a single floating-point operation: the distance is
// bit-exactly symmetric.
inline double chordal_distance_sq(const Subspace& p, const Subspace& q) {
    detail::require_compatible(p, q, "chordal_distance");
    const Eigen::MatrixXd overlap = p.basis() * q.basis().transpose();
    const int k = p.k();
    double overlap_sq = 0.0;
    for (int i = 0; i < k; ++i) {
        overlap_sq += overlap(i, i) * overlap(i, i);
        for (int j = i + 1; j < k; ++j)
            overlap_sq += overlap(i, j) * overlap(i, j) +
                          overlap(j, i) * overlap(j, i);
    }
    return std::max(0.0, double(k) - overlap_sq);
}

inline double chordal_distance(const Subspace& p, const Subspace& q) {
    return std::sqrt(chordal_distance_sq(p, q));
}

// Pi_p = A_p^T A_p: symmetric, idempotent, trace k.
inline Eigen::MatrixXd projection_matrix(const Subspace& p) {
    return p.basis().transpose() * p.basis();
}

namespace detail {

// Isometric flattening of a symmetric traceless matrix; see EmbeddedPoint.
inline Eigen::VectorXd flatten_traceless_symmetric(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    Eigen::VectorXd out((n - 1) * (n + 2) / 2);
    int idx = 0;
    double prefix = 0.0; // running sum d_0 + ... + d_{j-1}
    for (int j = 1; j < n; ++j) {
        prefix += m(j - 1, j - 1);
        out(idx++) = (prefix - double(j) * m(j, j)) /
                     std::sqrt(double(j) * double(j + 1));
    }
    const double sqrt2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out(idx++) = sqrt2 * m(i, j);
    return out;
}

} // namespace detail

// Phi(p) = Pi_p - (k/n) I. Lands on the sphere of radius
// sqrt(k(n-k)/n) inside the traceless symmetric matrices.
inline EmbeddedPoint embed(const Subspace& p) {
    const int n = p.n();
    Eigen::MatrixXd phi =
        projection_matrix(p) -
        (double(p.k()) / double(n)) * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd coords = detail::flatten_traceless_symmetric(phi);
    return EmbeddedPoint{std::move(phi), std::move(coords)};
}

// Plane equality under the chordal metric. Measured through the projector
// difference, which is exact at equality instead of sqrt(ulp)-noisy like the
// Gram route.
inline bool same_plane(const Subspace& p, const Subspace& q,
                       double tol = kPlaneEqualityTol) {
    detail::require_compatible(p, q, "same_plane");
    const double dsq =
        0.5 * (projection_matrix(p) - projection_matrix(q)).squaredNorm();
    return dsq < tol * tol;
}

} // namespace grasspack
