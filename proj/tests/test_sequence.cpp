#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "narval/sequence.hpp"

using namespace narval;

namespace {

struct Pairing {
    const RecurrenceSpec* spec;
    const oracle::Recurrence* reference;
};

const Pairing kBuiltins[] = {
    {&narayana(), &oracle::kNarayana},
    {&fibonacci(), &oracle::kFibonacci},
    {&tribonacci(), &oracle::kTribonacci},
    {&tripell(), &oracle::kTripell},
};

}  // namespace

TEST_CASE("builtin specs match their defining recurrences") {
    CHECK(narayana().coefficients() == std::vector<std::int64_t>{1, 0, 1});
    CHECK(narayana().initials() == std::vector<std::int64_t>{0, 1, 1});
    CHECK(fibonacci().order() == 2);
    CHECK(tripell().coefficients() == std::vector<std::int64_t>{2, 1, 1});
    CHECK(builtin_sequence("tribonacci") == tribonacci());
    CHECK_FALSE(builtin_sequence("lucas").has_value());
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(RecurrenceSpec("x", {1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(RecurrenceSpec("x", {1, 1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(RecurrenceSpec("x", {1, 0}, {0, 1}), std::invalid_argument);
    CHECK_NOTHROW(RecurrenceSpec("x", {-1, 3}, {2, -5}));
}

TEST_CASE("term reproduces the listed first terms") {
    const long narayana_listing[] = {0, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60, 88, 129, 189, 277};
    for (Index n = 0; n < std::size(narayana_listing); ++n) CHECK(term(narayana(), n) == narayana_listing[n]);

    const long tripell_listing[] = {0, 1, 2, 5, 13, 33, 84, 214, 545, 1388, 3535, 9003, 22929, 58396};
    for (Index n = 0; n < std::size(tripell_listing); ++n) CHECK(term(tripell(), n) == tripell_listing[n]);

    const long tribonacci_listing[] = {0, 1, 1, 2, 4, 7, 13, 24, 44, 81, 149, 274, 504, 927, 1705};
    for (Index n = 0; n < std::size(tribonacci_listing); ++n) CHECK(term(tribonacci(), n) == tribonacci_listing[n]);

    CHECK(term(fibonacci(), 16) == 987);
    CHECK(term(narayana(), 24) == 4023);
}

TEST_CASE("recurrence consistency against the textbook oracle up to 10^4") {
    for (const auto& [spec, reference] : kBuiltins) {
        const auto expected = oracle::exact_terms(*reference, 10'001);
        Index n = 0;
        for (const auto& e : term_stream(*spec, 0, 10'000)) {
            REQUIRE(e.n == n);
            REQUIRE(e.value == expected[n]);
            ++n;
        }
        CHECK(n == 10'001);
        CHECK(term(*spec, 7777) == expected[7777]);
    }
}

TEST_CASE("term_mod") {
    CHECK(term_mod(narayana(), 24, 81) == 54);
    CHECK(term_mod(narayana(), 26, 81) == 55);
    CHECK(term_mod(narayana(), 0, 7) == 0);
    CHECK(term_mod(tripell(), 2, 2) == 0);
    CHECK(term_mod(tripell(), 1, 5) == 1);
    CHECK_THROWS_AS(term_mod(narayana(), 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(term_mod(narayana(), 5, 0), std::invalid_argument);

    // 3^10
    CHECK(term_mod(narayana(), 1'000'000, 59049) == oracle::iterative_term_mod(oracle::kNarayana, 1'000'000, 59049));
}

TEST_CASE("modular agreement with exact terms for n <= 10^4") {
    const std::uint64_t moduli[] = {2, 3, 9, 81, 1000, 65537, 3486784401ULL, (1ULL << 61) - 1};
    for (const auto& [spec, reference] : kBuiltins) {
        const auto exact = oracle::exact_terms(*reference, 10'001);
        for (auto m : moduli) {
            for (Index n = 0; n <= 10'000; n += 37) {
                const mpz_class r = exact[n] % m;
                REQUIRE(term_mod(*spec, n, m) == r.get_ui());
            }
        }
    }
}

TEST_CASE("matrix powering matches O(n) iteration for 10^3 random pairs with n <= 10^6") {
    std::mt19937_64 rng(20241015);
    for (const auto& [spec, reference] : kBuiltins) {
        for (int batch = 0; batch < 5; ++batch) {
            const std::uint64_t m = std::uniform_int_distribution<std::uint64_t>(2, 1ULL << 40)(rng);
            const auto residues = oracle::iterative_residues(*reference, m, 1'000'001);
            for (int i = 0; i < 50; ++i) {
                const Index n = std::uniform_int_distribution<Index>(0, 1'000'000)(rng);
                REQUIRE(term_mod(*spec, n, m) == residues[n]);
            }
        }
    }
}

TEST_CASE("window_mod and advance stay in step") {
    const std::uint64_t m = 1'000'003;
    ResidueWindow w = window_mod(narayana(), 0, m);
    for (Index n = 0; n < 300; ++n) {
        REQUIRE(w == window_mod(narayana(), n, m));
        advance(narayana(), w, m);
    }
    ExactWindow e = window_at(tripell(), 10);
    advance(tripell(), e);
    CHECK(e == window_at(tripell(), 11));
}

TEST_CASE("term_stream") {
    std::vector<std::pair<Index, long>> got;
    for (const auto& e : term_stream(narayana(), 4, 7)) got.emplace_back(e.n, e.value.get_si());
    CHECK(got == std::vector<std::pair<Index, long>>{{4, 2}, {5, 3}, {6, 4}, {7, 6}});

    got.clear();
    for (const auto& e : term_stream(narayana(), 0, 0)) got.emplace_back(e.n, e.value.get_si());
    CHECK(got == std::vector<std::pair<Index, long>>{{0, 0}});

    got.clear();
    for (const auto& e : term_stream(fibonacci(), 10, 12)) got.emplace_back(e.n, e.value.get_si());
    CHECK(got == std::vector<std::pair<Index, long>>{{10, 55}, {11, 89}, {12, 144}});

    CHECK_THROWS_AS(term_stream(narayana(), 5, 4), std::invalid_argument);
}

TEST_CASE("narayana_addition") {
    for (Index n = 0; n < 30; ++n) CHECK(narayana_addition(3, n) == term(narayana(), n + 3));
    CHECK(narayana_addition(5, 2) == 6);
    CHECK_THROWS_AS(narayana_addition(2, 5), std::invalid_argument);
    CHECK_THROWS_AS(narayana_addition(0, 0), std::invalid_argument);

    const auto a = oracle::exact_terms(oracle::kNarayana, 4100);
    for (Index m = 3; m <= 200; ++m) {
        for (Index n = 0; n <= 200; ++n) REQUIRE(narayana_addition(m, n) == a[m + n]);
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const Index m = std::uniform_int_distribution<Index>(3, 2000)(rng);
        const Index n = std::uniform_int_distribution<Index>(0, 2000)(rng);
        REQUIRE(narayana_addition(m, n) == a[m + n]);
    }
}

TEST_CASE("period_mod") {
    CHECK(period_mod(narayana(), 3) == 8);
    CHECK(period_mod(narayana(), 9) == 24);
    CHECK(period_mod(narayana(), 2) == 7);
    CHECK(period_mod(fibonacci(), 10) == 60);
    CHECK(period_mod(narayana(), 9) % period_mod(narayana(), 3) == 0);

    CHECK_THROWS_AS(period_mod(narayana(), 1), std::invalid_argument);
    const RecurrenceSpec doubling("doubling", {1, 2}, {0, 1});
    CHECK_THROWS_AS(period_mod(doubling, 4), NotPurelyPeriodic);
    CHECK_NOTHROW(period_mod(doubling, 3));
}

TEST_CASE("periods are pure and minimal") {
    for (const auto& [spec, reference] : kBuiltins) {
        for (std::uint64_t m = 2; m <= 40; ++m) {
            const Index t = period_mod(*spec, m);
            CAPTURE(spec->name());
            CAPTURE(m);
            // State at t equals the state at 0; no smaller positive shift does.
            CHECK(window_mod(*spec, t, m).values == window_mod(*spec, 0, m).values);
            for (Index s = 1; s < t; ++s) REQUIRE(window_mod(*spec, s, m).values != window_mod(*spec, 0, m).values);
            CHECK(oracle::period_by_shift(*reference, m, 4 * t + 10) == t);
        }
    }
}
