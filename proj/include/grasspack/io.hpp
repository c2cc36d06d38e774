#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grasspack/bounds.hpp"
#include "grasspack/errors.hpp"
#include "grasspack/packing.hpp"
#include "grasspack/subspace.hpp"
#include "grasspack/verify.hpp"
#include "grasspack/volume.hpp"

namespace grasspack {

inline constexpr const char* kToolVersion = "0.1.0";

// %.12g: the fixed significance used by all tabular output, chosen so reruns
// diff cleanly. Negative zero is normalized away.
inline std::string format_sig12(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// %.17g round-trips doubles exactly; used by the plane/code text format.
inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- plane / code text format ----
// Plane: first line "k n", then k rows of n full-precision decimals.
// Code:  header line "M k n", then M planes in the plane format.

inline void write_subspace(std::ostream& os, const Subspace& p) {
    os << p.k() << ' ' << p.n() << '\n';
    for (int i = 0; i < p.k(); ++i) {
        for (int j = 0; j < p.n(); ++j) {
            if (j) os << ' ';
            os << format_full(p.basis()(i, j));
        }
        os << '\n';
    }
}

inline Subspace read_subspace(std::istream& is, bool allow_wide = false) {
    int k = 0, n = 0;
    if (!(is >> k >> n))
        throw Error("read_subspace: missing 'k n' header");
    if (k < 1 || n < 1 || k > n)
        throw DimensionError("read_subspace: bad header values");
    Eigen::MatrixXd rows(k, n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j)
            if (!(is >> rows(i, j)))
                throw Error("read_subspace: truncated matrix data");
    return orthonormalize(rows, allow_wide);
}

inline void write_code(std::ostream& os, const Code& code) {
    os << code.size() << ' ' << code.k() << ' ' << code.n() << '\n';
    for (const auto& p : code.planes()) write_subspace(os, p);
}

inline Code read_code(std::istream& is) {
    int M = 0, k = 0, n = 0;
    if (!(is >> M >> k >> n))
        throw Error("read_code: missing 'M k n' header");
    if (M < 1) throw Error("read_code: M must be >= 1");
    std::vector<Subspace> planes;
    planes.reserve(M);
    for (int i = 0; i < M; ++i) {
        Subspace p = read_subspace(is, /*allow_wide=*/2 * k > n);
        if (p.k() != k || p.n() != n)
            throw DimensionMismatch("read_code: plane header disagrees with code header");
        planes.push_back(std::move(p));
    }
    return Code(std::move(planes));
}

// ---- CSV emitters ----

inline std::string rate_table_csv(const std::vector<RatePoint>& rows) {
    std::ostringstream os;
    os << "delta,r_gv,r_rankin,r_lp,r_hamming\n";
    for (const auto& p : rows)
        os << format_sig12(p.delta) << ',' << format_sig12(p.r_gv) << ','
           << format_sig12(p.r_rankin) << ',' << format_sig12(p.r_lp) << ','
           << format_sig12(p.r_hamming) << '\n';
    return os.str();
}

inline std::string exponent_trace_csv(const std::vector<ExponentTracePoint>& rows) {
    std::ostringstream os;
    os << "n,samples,mu_hat,stderr,normalized_log\n";
    for (const auto& p : rows) {
        os << p.n << ',' << p.samples << ',' << format_sig12(p.mu_hat) << ','
           << format_sig12(p.std_error) << ',';
        os << (p.sufficient ? format_sig12(p.normalized_log) : "nan") << '\n';
    }
    return os.str();
}

// ---- JSON reports ----

// JSON has no infinity literal; the +inf minimum distance of a single-plane
// code is written as the string "inf".
inline nlohmann::json json_number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline nlohmann::json to_json(const BoundReport& rep) {
    nlohmann::json j{{"M", rep.M},
                     {"k", rep.k},
                     {"n", rep.n},
                     {"min_distance", json_number_or_inf(rep.min_distance)},
                     {"achieved_delta_sq", json_number_or_inf(rep.achieved_delta_sq)},
                     {"empirical_rate_nats_per_dim", rep.empirical_rate}};
    if (rep.rankin_delta_sq) {
        j["rankin_delta_sq"] = *rep.rankin_delta_sq;
        j["gap"] = *rep.gap;
    }
    if (rep.asymptotic_rates) {
        j["asymptotic_rates_at_delta"] = {
            {"note", "asymptotic curves evaluated at the achieved distance; "
                     "advisory at finite n"},
            {"r_gv", rep.asymptotic_rates->r_gv},
            {"r_rankin", rep.asymptotic_rates->r_rankin},
            {"r_lp", rep.asymptotic_rates->r_lp},
            {"r_hamming", rep.asymptotic_rates->r_hamming}};
    }
    return j;
}

inline nlohmann::json to_json(const VolumeEstimate& est) {
    return {{"mean", est.mean},   {"stderr", est.std_error},
            {"samples", est.samples}, {"rho", est.rho},
            {"k", est.k},         {"n", est.n}};
}

inline nlohmann::json to_json(const CountingCheck& chk) {
    return {{"M", chk.M},
            {"k", chk.k},
            {"n", chk.n},
            {"min_distance", json_number_or_inf(chk.min_distance)},
            {"delta_used", chk.delta_used},
            {"rho", chk.rho},
            {"mu_hat", chk.mu_hat},
            {"stderr", chk.std_error},
            {"lhs", chk.lhs},
            {"threshold", chk.threshold},
            {"pass", chk.pass}};
}

inline nlohmann::json to_json(const IsometryReport& rep) {
    return {{"trials", rep.pairs},
            {"max_isometry_error_over_k", rep.max_isometry_error_over_k},
            {"max_embedding_norm_error", rep.max_embedding_norm_error},
            {"max_flatten_norm_error", rep.max_flatten_norm_error},
            {"pass", rep.pass}};
}

inline nlohmann::json to_json(const DensityReport& rep) {
    return {{"trials", rep.trials},
            {"max_total_density", rep.max_total_density},
            {"max_quadratic_lhs", rep.max_quadratic_lhs},
            {"max_reduced_violation", rep.max_reduced_violation},
            {"pass", rep.pass}};
}

inline nlohmann::json to_json(const QuadraticReport& rep) {
    return {{"trials", rep.trials},
            {"max_quadratic_lhs", rep.max_quadratic_lhs},
            {"pass", rep.pass}};
}

inline nlohmann::json to_json(const CountingReport& rep) {
    return {{"codes", rep.codes},
            {"failures", rep.failures},
            {"worst_margin", rep.worst_margin},
            {"pass", rep.pass}};
}

} // namespace grasspack
