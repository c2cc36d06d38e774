#include <doctest.h>

#include <cmath>
#include <vector>

#include "grasspack/bounds.hpp"
#include "support/oracles.hpp"

using namespace grasspack;

TEST_CASE("rate_gv: closed-form anchor points") {
    for (int k : {1, 2, 3, 7}) {
        const double top = std::sqrt(double(k));
        CHECK(rate_gv(top, k) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(rate_gv(top * std::exp(-1.0), k) == doctest::Approx(double(k)).epsilon(1e-12));
    }
    CHECK(rate_gv(std::sqrt(3.0) / 2.0, 3) ==
          doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rate_gv(0.0, 3), DomainError);
    CHECK_THROWS_AS(rate_gv(2.0, 3), DomainError);
    CHECK_THROWS_AS(rate_gv(-1.0, 3), DomainError);
}

TEST_CASE("rate_hamming: endpoint value and divergence near zero") {
    for (int k : {2, 3, 5}) {
        const double expect = -0.5 * k * std::log(1.0 - 1.0 / std::sqrt(2.0));
        CHECK(rate_hamming(std::sqrt(double(k)), k) ==
              doctest::Approx(expect).epsilon(1e-12));
        CHECK(rate_hamming(1e-6, k) > 10.0 * k);
    }
    CHECK(rate_hamming(1.0, 3) > rate_rankin(1.0, 3));
}

TEST_CASE("rate_lp: vanishes at sqrt(k), s anchor, k=1 specialization") {
    for (int k : {1, 2, 3, 5})
        CHECK(rate_lp(std::sqrt(double(k)), k) == doctest::Approx(0.0).epsilon(1e-12));

    // at delta = sqrt(k)/2 the auxiliary variable equals k/2
    for (int k : {2, 4}) {
        const double s = double(k) / 2.0;
        const double expect =
            k * ((1.0 + s) * std::log1p(s) - s * std::log(s));
        CHECK(rate_lp(std::sqrt(double(k)) / 2.0, k) ==
              doctest::Approx(expect).epsilon(1e-13));
    }

    CHECK(rate_lp(1.0, 1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("rate_rankin: endpoint and ordering between gv and hamming") {
    for (int k : {1, 2, 3, 10})
        CHECK(rate_rankin(std::sqrt(double(k)), k) ==
              doctest::Approx(0.0).epsilon(5e-8));
    const double r = rate_rankin(1.0, 3);
    CHECK(r > rate_gv(1.0, 3));
    CHECK(r < rate_hamming(1.0, 3));
}

TEST_CASE("rate_rankin equals rate_hamming at sqrt(2) times the distance") {
    for (int k = 1; k <= 10; ++k) {
        const double top = std::sqrt(double(k) / 2.0);
        for (int i = 1; i <= 100; ++i) {
            const double d = top * double(i) / 100.0;
            CHECK(std::abs(rate_rankin(d, k) -
                           rate_hamming(std::sqrt(2.0) * d, k)) <= 1e-12);
        }
    }
}

TEST_CASE("bound ordering gv <= rankin < hamming on a dense grid") {
    for (int k : {1, 2, 3, 5, 10}) {
        const double top = std::sqrt(double(k));
        for (int i = 1; i < 400; ++i) {
            const double d = top * double(i) / 400.0;
            const double gv = rate_gv(d, k);
            const double rr = rate_rankin(d, k);
            const double h = rate_hamming(d, k);
            CHECK(gv <= rr + 1e-12);
            CHECK(rr < h);
        }
    }
}

TEST_CASE("all four rates decrease in the distance") {
    for (int k : {1, 3, 5}) {
        const double top = std::sqrt(double(k));
        RatePoint prev = rate_point(top * 1e-3, k);
        for (int i = 1; i <= 256; ++i) {
            const RatePoint cur = rate_point(top * (1e-3 + (1 - 2e-3) * i / 256.0), k);
            CHECK(cur.r_gv < prev.r_gv);
            CHECK(cur.r_rankin < prev.r_rankin);
            CHECK(cur.r_lp < prev.r_lp);
            CHECK(cur.r_hamming < prev.r_hamming);
            prev = cur;
        }
    }
}

TEST_CASE("rankin_sq_bound: tight small configurations and the large-M branch") {
    CHECK(rankin_sq_bound(3, 1, 2) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(rankin_sq_bound(6, 1, 3) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(rankin_sq_bound(1000000, 2, 6) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    // the classical configurations achieve the bound with equality
    const grasspack::Code three = oracle::three_lines_r2();
    CHECK(three.min_distance() * three.min_distance() ==
          doctest::Approx(0.75).epsilon(1e-12));
    const grasspack::Code ico = oracle::icosahedron_lines();
    CHECK(ico.min_distance() * ico.min_distance() ==
          doctest::Approx(0.8).epsilon(1e-12));

    CHECK_THROWS_AS(rankin_sq_bound(1, 1, 2), DomainError);
    CHECK_THROWS_AS(rankin_sq_bound(3, 2, 2), DomainError);
}

TEST_CASE("rankin_sq_bound is non-increasing in M and continuous at the branch") {
    const int k = 2, n = 6;
    double prev = rankin_sq_bound(2, k, n);
    const std::int64_t cap = n * (n + 1) / 2;
    for (std::int64_t M = 3; M <= cap + 5; ++M) {
        const double cur = rankin_sq_bound(M, k, n);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }
    // at the threshold the two branches differ exactly by the M/(M-1) factor
    const double at_cap = rankin_sq_bound(cap, k, n);
    const double past_cap = rankin_sq_bound(cap + 1, k, n);
    CHECK(at_cap == doctest::Approx(past_cap * double(cap) / double(cap - 1)).epsilon(1e-14));
}

TEST_CASE("crossover roots reproduce the reference table") {
    CHECK(std::abs(crossover_delta_star(2) - 1.37) <= 0.01);
    CHECK(std::abs(crossover_delta_star(3) - 1.717) <= 0.005);
    CHECK(std::abs(crossover_delta_star(4) - 1.992) <= 0.005);
    CHECK(std::abs(crossover_delta_star(5) - 2.231) <= 0.005);
    CHECK(std::abs(crossover_delta_star(10) - 3.161) <= 0.005);

    CHECK(std::abs(crossover_lp_hamming(2) - 0.74) <= 0.01);
    CHECK(std::abs(crossover_lp_hamming(3) - 1.31) <= 0.01);

    CHECK_THROWS_AS(crossover_delta_star(1), DomainError);
    CHECK_THROWS_AS(crossover_lp_hamming(1), DomainError);
}

TEST_CASE("rankin-vs-lp sign changes exactly once past a tenth of sqrt(k)") {
    for (int k : {2, 3, 4, 5, 10}) {
        const double top = std::sqrt(double(k));
        int flips = 0;
        double prev = rate_rankin(0.1 * top, k) - rate_lp(0.1 * top, k);
        for (int i = 1; i <= 2000; ++i) {
            const double d = top * (0.1 + 0.8999995 * i / 2000.0);
            const double cur = rate_rankin(d, k) - rate_lp(d, k);
            if ((prev < 0) != (cur < 0)) ++flips;
            prev = cur;
        }
        CHECK(flips == 1);
    }
}

TEST_CASE("lp-vs-hamming sign changes exactly once for k=5") {
    const int k = 5;
    const double top = std::sqrt(double(k));
    const double root = crossover_lp_hamming(k);
    CHECK(root > 0.0);
    CHECK(root < top);
    int flips = 0;
    double prev = rate_lp(0.05 * top, k) - rate_hamming(0.05 * top, k);
    for (int i = 1; i <= 2000; ++i) {
        const double d = top * (0.05 + 0.9499995 * i / 2000.0);
        const double cur = rate_lp(d, k) - rate_hamming(d, k);
        if ((prev < 0) != (cur < 0)) ++flips;
        prev = cur;
    }
    CHECK(flips == 1);
}

TEST_CASE("rate table rows follow the expected curve order") {
    const auto at_one = emit_rate_table(3, {1.0});
    REQUIRE(at_one.size() == 1);
    CHECK(at_one[0].r_lp > at_one[0].r_rankin);
    CHECK(at_one[0].r_rankin > at_one[0].r_gv);

    const auto at_top = emit_rate_table(3, {std::sqrt(3.0)});
    CHECK(at_top[0].r_lp == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_top[0].r_rankin == doctest::Approx(0.0).epsilon(5e-8));
    CHECK(at_top[0].r_gv == doctest::Approx(0.0).epsilon(1e-12));

    // past the crossover (1.7168) but still inside (0, sqrt(3)]
    const auto past = emit_rate_table(3, {1.72});
    CHECK(past[0].r_rankin > past[0].r_lp);

    CHECK_THROWS_AS(emit_rate_table(3, std::vector<double>{1.8}), DomainError);
}
