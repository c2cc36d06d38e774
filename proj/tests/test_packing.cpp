#include <doctest.h>

#include <cmath>
#include <limits>

#include "grasspack/bounds.hpp"
#include "grasspack/packing.hpp"
#include "grasspack/volume.hpp"
#include "support/oracles.hpp"

using namespace grasspack;

TEST_CASE("random codes: sentinel for a single plane, determinism, positivity") {
    Rng rng(1);
    const Code one = random_code(1, 2, 6, rng);
    CHECK(std::isinf(one.min_distance()));

    Rng a(7), b(7);
    const Code ca = random_code(5, 2, 8, a);
    const Code cb = random_code(5, 2, 8, b);
    CHECK(ca.min_distance() == cb.min_distance());
    for (int i = 0; i < 5; ++i)
        CHECK((ca.planes()[i].basis() - cb.planes()[i].basis()).cwiseAbs().maxCoeff() == 0.0);

    Rng big(3);
    const Code hundred = random_code(100, 2, 8, big);
    CHECK(hundred.min_distance() > 0.0);
    CHECK(hundred.size() == 100);
}

TEST_CASE("code type validates its planes and caches the minimum distance") {
    Rng rng(5);
    std::vector<Subspace> mixed;
    mixed.push_back(sample_uniform_subspace(6, 2, rng));
    mixed.push_back(sample_uniform_subspace(8, 2, rng));
    CHECK_THROWS_AS(Code{mixed}, DimensionMismatch);

    const Code code = random_code(8, 2, 6, rng);
    CHECK(code.min_distance() ==
          doctest::Approx(code.recompute_min_distance()).epsilon(1e-10));
}

TEST_CASE("greedy packing: near-diameter targets give tiny codes") {
    Rng rng(11);
    const Code tight = greedy_packing(0.98 * std::sqrt(2.0), 2, 6, 60, rng);
    CHECK(tight.size() <= 3);
    CHECK_THROWS_AS(greedy_packing(0.0, 2, 6, 10, rng), DomainError);
    CHECK_THROWS_AS(greedy_packing(std::sqrt(2.0), 2, 6, 10, rng), DomainError);
}

TEST_CASE("greedy packing: small targets keep growing until the budget ends") {
    Rng rng(13);
    const Code loose = greedy_packing(0.05, 1, 4, 50, rng);
    const Code tight = greedy_packing(0.9, 1, 4, 50, rng);
    CHECK(loose.size() > tight.size());
    CHECK(loose.min_distance() >= 0.05);
    CHECK(tight.min_distance() >= 0.9);
}

TEST_CASE("greedy packing is deterministic for a fixed seed") {
    Rng a(21), b(21);
    const Code ca = greedy_packing(0.5, 1, 4, 100, a);
    const Code cb = greedy_packing(0.5, 1, 4, 100, b);
    CHECK(ca.size() == cb.size());
    CHECK(ca.min_distance() == cb.min_distance());
}

TEST_CASE("greedy output is consistent with the counting bound") {
    Rng rng(17);
    const Code code = greedy_packing(0.5, 1, 4, 200, rng);
    CHECK(code.min_distance() >= 0.5);
    const CountingCheck chk = counting_bound_check(code, 40000, 29, 2);
    CHECK(chk.pass);
}

TEST_CASE("optimizer never returns something worse than its input") {
    Rng rng(23);
    for (int t = 0; t < 5; ++t) {
        const Code start = random_code(4, 2, 6, rng);
        const OptimizeResult res = optimize_code(start, OptimizeOptions{300, 0.1, 0.25});
        CHECK(res.code.min_distance() >= start.min_distance() - 1e-12);
    }
    CHECK_THROWS_AS(optimize_code(random_code(1, 2, 6, rng), OptimizeOptions{}),
                    DomainError);
}

TEST_CASE("optimizer reaches the three-line optimum in the plane") {
    double best = 0.0;
    for (int r = 0; r < 5; ++r) {
        Rng rng(100 + r);
        const OptimizeResult res =
            optimize_code(random_code(3, 1, 2, rng), OptimizeOptions{});
        best = std::max(best, std::pow(res.code.min_distance(), 2));
    }
    CHECK(best >= 0.75 - 1e-3);
    CHECK(best <= rankin_sq_bound(3, 1, 2) + 1e-9);
}

TEST_CASE("optimizer drives two planes to full orthogonality") {
    Rng rng(31);
    const OptimizeResult res =
        optimize_code(random_code(2, 2, 5, rng), OptimizeOptions{});
    CHECK(std::pow(res.code.min_distance(), 2) >= 2.0 - 1e-6);
    CHECK(res.converged);
}

TEST_CASE("bound report: the classical configurations meet the bound exactly") {
    const BoundReport three = bound_report(oracle::three_lines_r2());
    REQUIRE(three.rankin_delta_sq.has_value());
    CHECK(three.achieved_delta_sq == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(*three.rankin_delta_sq == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(std::abs(*three.gap) < 1e-12);

    const BoundReport ico = bound_report(oracle::icosahedron_lines());
    CHECK(ico.achieved_delta_sq == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(std::abs(*ico.gap) < 1e-12);
    REQUIRE(ico.asymptotic_rates.has_value());
    CHECK(ico.empirical_rate == doctest::Approx(std::log(6.0) / 3.0).epsilon(1e-14));
}

TEST_CASE("bound report: single-plane codes carry the infinity sentinel") {
    Rng rng(37);
    const BoundReport rep = bound_report(random_code(1, 1, 4, rng));
    CHECK(std::isinf(rep.min_distance));
    CHECK_FALSE(rep.rankin_delta_sq.has_value());
}

TEST_CASE("every produced code respects the finite-size bound") {
    Rng rng(41);
    double worst = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 60; ++t) {
        const int M = static_cast<int>(rng.uniform_int(2, 12));
        const Code code = random_code(M, 2, 6, rng);
        worst = std::max(worst, std::pow(code.min_distance(), 2) -
                                    rankin_sq_bound(M, 2, 6));
    }
    for (int t = 0; t < 5; ++t) {
        const OptimizeResult res =
            optimize_code(random_code(4, 1, 3, rng), OptimizeOptions{500, 0.1, 0.25});
        worst = std::max(worst, std::pow(res.code.min_distance(), 2) -
                                    rankin_sq_bound(4, 1, 3));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("pairwise validity of emitted codes") {
    Rng rng(43);
    const Code code = greedy_packing(0.6, 2, 6, 80, rng);
    const auto& planes = code.planes();
    for (std::size_t i = 0; i < planes.size(); ++i)
        for (std::size_t j = i + 1; j < planes.size(); ++j)
            CHECK(chordal_distance(planes[i], planes[j]) >=
                  code.min_distance() - 1e-10);
}
