#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdint>

#include "pufslot/collision.hpp"

using namespace pufslot;
using boost::multiprecision::cpp_rational;

TEST_CASE("exact probability: boundaries") {
    CHECK(collision::collision_probability_exact({9, 0}).probability == 0.0);
    CHECK(collision::collision_probability_exact({9, 1}).probability == 0.0);
    // p(n=2) = 2^-N exactly (one survivor term)
    for (int order = 1; order <= 20; ++order)
        CHECK(collision::collision_probability_exact({order, 2}).probability ==
              std::ldexp(1.0, -order));
    // pigeonhole extension
    CHECK(collision::collision_probability_exact({2, 5}).probability == 1.0);
    CHECK(collision::collision_probability_exact({4, 17}).probability == 1.0);
    CHECK_THROWS_AS(collision::collision_probability_exact({0, 3}), std::out_of_range);
    CHECK_THROWS_AS(collision::collision_probability_exact({3, -1}), std::out_of_range);
}

TEST_CASE("exact probability: spot values") {
    // 1 - (8*7*6)/8^3 = 11/32, exact in binary floating point
    CHECK(collision::collision_probability_exact({3, 3}).probability == 0.34375);
    CHECK(collision::collision_probability_exact({9, 26}).probability ==
          doctest::Approx(0.475638608116541).epsilon(1e-14));
    CHECK(collision::collision_probability_exact({9, 27}).probability ==
          doctest::Approx(0.5022663350481229).epsilon(1e-14));
}

TEST_CASE("rational oracle: exact values and range errors") {
    CHECK(collision::collision_probability_rational({3, 3}) == cpp_rational(11, 32));
    CHECK(collision::collision_probability_rational({1, 2}) == cpp_rational(1, 2));
    CHECK(collision::collision_probability_rational({4, 17}) == 1);
    CHECK(collision::collision_probability_rational({8, 0}) == 0);
    CHECK_THROWS_AS(collision::collision_probability_rational({9, 3}), std::out_of_range);
    CHECK_THROWS_AS(collision::collision_probability_rational({3, -2}), std::out_of_range);
}

TEST_CASE("floating-point path agrees with the rational oracle to 1e-12") {
    double worst = 0.0;
    for (int order = 1; order <= 8; ++order) {
        const std::int64_t slots = std::int64_t{1} << order;
        for (std::int64_t n = 0; n <= slots; ++n) {
            const double exact = collision::collision_probability_exact({order, n}).probability;
            const double oracle = collision::rational_oracle_estimate({order, n}).probability;
            worst = std::max(worst, std::abs(exact - oracle));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("probability is monotone in n and in order") {
    for (int order : {1, 3, 6, 9, 12}) {
        double prev = -1.0;
        const std::int64_t limit = std::min<std::int64_t>(300, (std::int64_t{1} << order) + 2);
        for (std::int64_t n = 0; n <= limit; ++n) {
            const double p = collision::collision_probability_exact({order, n}).probability;
            CHECK(p >= prev);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            prev = p;
        }
    }
    for (std::int64_t n : {2, 5, 26}) {
        double prev = 2.0;
        for (int order = 1; order <= 17; ++order) {
            const double p = collision::collision_probability_exact({order, n}).probability;
            CHECK(p <= prev);
            prev = p;
        }
    }
}

TEST_CASE("nodes supported per order") {
    CHECK(collision::nodes_supported(1) == 1);
    CHECK(collision::nodes_supported(9) == 26);
    CHECK(collision::nodes_supported(17) == 426);

    std::int64_t prev = 0;
    for (int order = 1; order <= 17; ++order) {
        const auto n = collision::nodes_supported(order);
        CHECK(n >= prev);
        // definition check: p(n) < 0.5 <= p(n+1)
        CHECK(collision::collision_probability_exact({order, n}).probability < 0.5);
        CHECK(collision::collision_probability_exact({order, n + 1}).probability >= 0.5);
        prev = n;
    }
    CHECK_THROWS_AS(collision::nodes_supported(0), std::out_of_range);
}

TEST_CASE("Monte Carlo: degenerate cases and determinism") {
    const auto zero = collision::monte_carlo_collision({9, 1}, 500, 7);
    CHECK(zero.probability == 0.0);
    CHECK(zero.std_error == 0.0);
    CHECK(zero.trials == 500);
    CHECK(collision::monte_carlo_collision({2, 5}, 500, 7).probability == 1.0);

    const auto a = collision::monte_carlo_collision({9, 26}, 2000, 99);
    const auto b = collision::monte_carlo_collision({9, 26}, 2000, 99);
    CHECK(a.probability == b.probability);
    CHECK_THROWS_AS(collision::monte_carlo_collision({9, 26}, 0, 1), std::out_of_range);
}

TEST_CASE("Monte Carlo tracks the exact value") {
    const double exact = collision::collision_probability_exact({9, 26}).probability;
    const auto mc = collision::monte_carlo_collision({9, 26}, 100000, 424242);
    CHECK(std::abs(mc.probability - exact) <= 3.0 * mc.std_error);
    CHECK(mc.method == collision::Method::MonteCarlo);
}

TEST_CASE("Monte Carlo coverage over many independent seeds") {
    const double exact = collision::collision_probability_exact({6, 10}).probability;
    int within = 0;
    const int runs = 200;
    for (int seed = 0; seed < runs; ++seed) {
        const auto mc = collision::monte_carlo_collision({6, 10}, 2000, static_cast<std::uint64_t>(seed));
        if (std::abs(mc.probability - exact) <= 3.0 * mc.std_error) ++within;
    }
    CHECK(within >= runs * 99 / 100);
}
