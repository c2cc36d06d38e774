#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace grasspack {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace detail

// Deterministic random stream. Gaussian draws go through an explicit
// Box-Muller transform instead of std::normal_distribution, so sequences are
// identical across standard library implementations. substream() derives an
// independent stream from (seed, index); campaigns that split work into
// blocks use it to stay order-independent under any thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(detail::splitmix64(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(detail::splitmix64(seed) ^
                   detail::splitmix64(stream * 0xD1B54A32D192ED03ull + 1));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in (0, 1]; never returns 0 so it is safe under log().
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * 3.14159265358979323846 * u2;
        spare_ = mag * std::sin(ang);
        has_spare_ = true;
        return mag * std::cos(ang);
    }

    Eigen::VectorXd gaussian_vector(int dim) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = normal();
        return v;
    }

    Eigen::MatrixXd gaussian_matrix(int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = normal();
        return m;
    }

    // Uniform point on the unit sphere in R^dim.
    Eigen::VectorXd unit_vector(int dim) {
        for (;;) {
            Eigen::VectorXd v = gaussian_vector(dim);
            const double norm = v.norm();
            if (norm > 1e-12) return v / norm;
        }
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace grasspack
