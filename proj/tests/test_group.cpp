#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tieq/group.hpp"

using namespace tieq;
using testutil::Rng;

TEST_CASE("mixed-radix indexing is a bijection") {
    FiniteAbelianGroup g({4, 9});
    REQUIRE(g.order() == 36);
    std::vector<char> seen(36, 0);
    for (std::int64_t a = 0; a < 4; ++a)
        for (std::int64_t b = 0; b < 9; ++b) {
            Index i = g.index_of(std::vector<std::int64_t>{a, b});
            REQUIRE(i >= 0);
            REQUIRE(i < 36);
            CHECK(!seen[static_cast<std::size_t>(i)]);
            seen[static_cast<std::size_t>(i)] = 1;
            CHECK(g.coords_of(i) == std::vector<std::int64_t>{a, b});
        }
}

TEST_CASE("coordinates reduce modulo each factor") {
    FiniteAbelianGroup g({5, 3});
    CHECK(g.index_of(std::vector<std::int64_t>{7, -1}) == g.index_of(std::vector<std::int64_t>{2, 2}));
}

TEST_CASE("group arithmetic matches coordinatewise arithmetic") {
    Rng rng(20260815);
    FiniteAbelianGroup g({6, 4, 5});
    for (int trial = 0; trial < 200; ++trial) {
        Index a = testutil::pick(rng, 0, g.order() - 1);
        Index b = testutil::pick(rng, 0, g.order() - 1);
        auto ca = g.coords_of(a), cb = g.coords_of(b);
        std::vector<std::int64_t> sum(3), diff(3), neg(3);
        for (int i = 0; i < 3; ++i) {
            std::int64_t f = g.factors()[static_cast<std::size_t>(i)];
            sum[static_cast<std::size_t>(i)] = (ca[static_cast<std::size_t>(i)] + cb[static_cast<std::size_t>(i)]) % f;
            diff[static_cast<std::size_t>(i)] = ((ca[static_cast<std::size_t>(i)] - cb[static_cast<std::size_t>(i)]) % f + f) % f;
            neg[static_cast<std::size_t>(i)] = (f - ca[static_cast<std::size_t>(i)]) % f;
        }
        CHECK(g.add(a, b) == g.index_of(sum));
        CHECK(g.sub(a, b) == g.index_of(diff));
        CHECK(g.neg(a) == g.index_of(neg));
        CHECK(g.add(a, g.neg(a)) == 0);
    }
}

TEST_CASE("pairing is bilinear and unimodular") {
    Rng rng(7);
    FiniteAbelianGroup g({8, 3});
    for (int trial = 0; trial < 100; ++trial) {
        Index chi = testutil::pick(rng, 0, g.order() - 1);
        Index x = testutil::pick(rng, 0, g.order() - 1);
        Index y = testutil::pick(rng, 0, g.order() - 1);
        std::complex<double> lhs = g.pairing(chi, g.add(x, y));
        std::complex<double> rhs = g.pairing(chi, x) * g.pairing(chi, y);
        CHECK(std::abs(lhs - rhs) < 1e-12);
        CHECK(std::abs(std::abs(g.pairing(chi, x)) - 1.0) < 1e-12);
    }
    CHECK(g.pairing(0, 5) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("pairing phase is an exact rational") {
    // Z/12, chi = 1: the phase of chi(x) is x/12 exactly
    FiniteAbelianGroup g({12});
    CHECK(g.phase_unit() % 12 == 0);
    for (Index x = 0; x < 12; ++x)
        CHECK(g.pairing_phase(1, x) * 12 == x * g.phase_unit());
}

TEST_CASE("pairing distance is the exact chord length") {
    FiniteAbelianGroup g({12});
    const double pi = std::acos(-1.0);
    // |1 - e^{2 pi i /12}| = 2 sin(pi/12)
    CHECK(g.pairing_distance(1, 1) == doctest::Approx(2.0 * std::sin(pi / 12.0)).epsilon(1e-14));
    CHECK(g.pairing_distance(1, 6) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(g.pairing_distance(1, 0) == 0.0);
    // distance only depends on the product character value: symmetric roles
    FiniteAbelianGroup h({5, 7});
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Index chi = testutil::pick(rng, 0, h.order() - 1);
        Index x = testutil::pick(rng, 0, h.order() - 1);
        CHECK(h.pairing_distance(chi, x) == doctest::Approx(std::abs(1.0 - h.pairing(chi, x))).epsilon(1e-13));
        CHECK(h.pairing_distance(chi, x) == h.pairing_distance(x, chi));
    }
}

TEST_CASE("group construction rejects bad factor lists") {
    CHECK_THROWS_AS(FiniteAbelianGroup({}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteAbelianGroup({1}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteAbelianGroup({0}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteAbelianGroup({-3}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteAbelianGroup({5, 1}), std::invalid_argument);
}

TEST_CASE("power groups and describe") {
    FiniteAbelianGroup g = FiniteAbelianGroup::power(5, 2);
    CHECK(g.order() == 25);
    CHECK(g.uniform_modulus());
    CHECK(g.modulus() == 5);
    CHECK(!FiniteAbelianGroup({4, 9}).uniform_modulus());
    CHECK(g.describe().find('5') != std::string::npos);
}

TEST_CASE("sorted set helpers") {
    auto u = sorted_unique({5, 1, 3, 1, 5});
    CHECK(u == std::vector<Index>{1, 3, 5});
    CHECK(sorted_contains(u, 3));
    CHECK(!sorted_contains(u, 2));
    CHECK(sorted_is_subset({1, 5}, u));
    CHECK(!sorted_is_subset({1, 2}, u));
    CHECK(sorted_intersect({1, 3, 5}, {3, 4, 5}) == std::vector<Index>{3, 5});
    CHECK(sorted_intersect({1, 2}, {3, 4}).empty());
}
