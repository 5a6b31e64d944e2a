#include <cmath>
#include <map>

#include "doctest.h"
#include "oracles.hpp"

#include "narval/diophantine.hpp"
#include "narval/serialize.hpp"

using namespace narval;

namespace {

Rational inverse_power_of_ten(unsigned k) {
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, k);
    return Rational(BigInt(1), den);
}

const RootInterval& tight_root() {
    static const RootInterval root = isolate_alpha(inverse_power_of_ten(6));
    return root;
}

}  // namespace

TEST_CASE("isolate_alpha") {
    const RootInterval coarse = isolate_alpha(inverse_power_of_ten(4));
    CHECK(coarse.hi - coarse.lo <= inverse_power_of_ten(4));
    // Rounds to 1.4656 at four places.
    CHECK(coarse.hi >= Rational(29311, 20000));
    CHECK(coarse.lo <= Rational(29313, 20000));

    const RootInterval whole = isolate_alpha(Rational(1));
    CHECK(whole.lo == 1);
    CHECK(whole.hi == 2);

    const RootInterval fine = isolate_alpha(inverse_power_of_ten(30));
    CHECK(fine.hi - fine.lo <= inverse_power_of_ten(30));
    CHECK(sgn(narayana_char_poly(fine.lo)) < 0);
    CHECK(sgn(narayana_char_poly(fine.hi)) > 0);
    CHECK(std::abs(fine.lo.get_d() - 1.465571231876768) < 1e-15);

    CHECK_THROWS_AS(isolate_alpha(Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(isolate_alpha(Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("root bracket keeps its sign certificate at every bisection depth") {
    Rational width = 1;
    for (int step = 0; step <= 120; ++step) {
        const RootInterval r = isolate_alpha(width);
        REQUIRE(sgn(narayana_char_poly(r.lo)) < 0);
        REQUIRE(sgn(narayana_char_poly(r.hi)) > 0);
        REQUIRE(r.lo >= 1);
        REQUIRE(r.hi <= 2);
        REQUIRE(r.hi - r.lo <= width);
        width /= 2;
    }
}

TEST_CASE("check_growth") {
    CHECK(check_growth(1, tight_root()).passed());
    CHECK(check_growth(2, tight_root()).passed());
    CHECK(check_growth(24, tight_root()).passed());
    CHECK_THROWS_AS(check_growth(0, tight_root()), std::invalid_argument);

    // lo^21 ~ 3063 and hi^23 ~ 6579 bracket a_24 = 4023.
    const double lo21 = std::pow(tight_root().lo.get_d(), 21);
    const double hi23 = std::pow(tight_root().hi.get_d(), 23);
    CHECK(lo21 == doctest::Approx(3063).epsilon(0.001));
    CHECK(hi23 == doctest::Approx(6579).epsilon(0.001));
    CHECK(lo21 < 4023);
    CHECK(4023 < hi23);

    for (Index n = 1; n <= 300; ++n) REQUIRE(check_growth(n, tight_root()).passed());
    CHECK(check_growth_upto(2000, tight_root()).empty());
}

TEST_CASE("check_growth rejects a bracket that is not around the root") {
    const RootInterval too_high{Rational(3, 2), Rational(8, 5), Rational(1, 10)};
    const auto failures = check_growth_upto(200, too_high);
    REQUIRE_FALSE(failures.empty());
    CHECK_FALSE(failures.back().lower_holds);
    CHECK(failures.back().upper_holds);

    const RootInterval too_low{Rational(7, 5), Rational(29, 20), Rational(1, 10)};
    const auto low_failures = check_growth_upto(200, too_low);
    REQUIRE_FALSE(low_failures.empty());
    CHECK_FALSE(low_failures.back().upper_holds);
}

TEST_CASE("derive_bounds") {
    const BoundReport report = derive_bounds(tight_root());
    CHECK(report.m_max == 68);
    CHECK(report.last_feasible_m == 67);
    CHECK(report.n_max == 630);
    REQUIRE(report.per_m_trace.size() == 63);
    CHECK(report.per_m_trace.front().m == 6);
    const BoundTraceRow& last = report.per_m_trace.back();
    CHECK(last.m == 68);
    CHECK(last.lhs == 6);
    CHECK_FALSE(last.feasible);
    for (const auto& row : report.per_m_trace) {
        CHECK(row.stable);
        CHECK(row.rhs_lower <= row.rhs_upper);
        CHECK(row.feasible == (row.m < 68));
    }

    const RootInterval wide = isolate_alpha(inverse_power_of_ten(3));
    CHECK_THROWS_AS(derive_bounds(wide), std::invalid_argument);
}

TEST_CASE("search-bound condition against a floating-point reference") {
    // Margins at every m in this range are far above double rounding.
    const double lo = tight_root().lo.get_d();
    const double hi = tight_root().hi.get_d();
    const BoundReport report = derive_bounds(tight_root());
    for (const auto& row : report.per_m_trace) {
        const double m = static_cast<double>(row.m);
        int k = 0;
        while (std::pow(3.0, k + 1) <= m) ++k;
        const double lhs = std::floor(m / 8 - k / 4.0 - 7.0 / 4);
        const auto rhs = [m](double a) { return std::log(11 + m * std::log(m / 2) / std::log(a)) / std::log(3.0); };
        CHECK(row.lhs == static_cast<std::int64_t>(lhs));
        CHECK(row.rhs_upper == doctest::Approx(rhs(lo)).epsilon(1e-12));
        CHECK(row.rhs_lower == doctest::Approx(rhs(hi)).epsilon(1e-12));
        CHECK(row.feasible == (lhs <= rhs(hi)));
    }
    CHECK(3 + 68 * std::log(34.0) / std::log(1.465571231876768) == doctest::Approx(630.33).epsilon(1e-4));
}

TEST_CASE("solve_factorial") {
    const std::vector<SolutionPair> expected{{1, 1}, {2, 1}, {3, 1}, {4, 2}, {7, 3}};
    CHECK(solve_factorial() == expected);

    const FactorialSearch search = search_factorial(derive_bounds(tight_root()));
    CHECK(search.large_m.empty());
    CHECK(search.small_m == expected);
    for (const auto& s : search.solutions) {
        CHECK(s.n <= search.bounds.n_max);
        CHECK(s.m <= search.bounds.m_max);
        CHECK(term(narayana(), s.n) == oracle::factorial(s.m));
    }
}

TEST_CASE("brute-force set intersection finds the same five pairs") {
    const auto a = oracle::exact_terms(oracle::kNarayana, 2001);
    std::map<mpz_class, unsigned long> factorials;
    for (unsigned long m = 1; m <= 12; ++m) factorials.emplace(oracle::factorial(m), m);
    std::vector<SolutionPair> found;
    for (Index n = 1; n <= 2000; ++n) {
        if (auto it = factorials.find(a[n]); it != factorials.end()) found.push_back({n, it->second});
    }
    CHECK(found == solve_factorial());
}

TEST_CASE("Narayana terms are monotone from n = 1 and strictly so from n = 4") {
    const auto a = oracle::exact_terms(oracle::kNarayana, 2001);
    for (Index n = 2; n <= 2000; ++n) {
        REQUIRE(a[n] >= a[n - 1]);
        if (n >= 5) REQUIRE(a[n] > a[n - 1]);
    }
}

TEST_CASE("bound report and solutions serialize") {
    const BoundReport report = derive_bounds(tight_root());
    const auto doc = to_json(report);
    CHECK(doc["m_max"] == 68);
    CHECK(doc["n_max"] == 630);
    CHECK(doc["last_feasible_m"] == 67);
    CHECK(doc["per_m_trace"].size() == 63);
    CHECK(Rational(doc["root"]["lo"].get<std::string>()) == tight_root().lo);

    const auto sols = to_json(solve_factorial());
    REQUIRE(sols.is_array());
    CHECK(sols.size() == 5);
    CHECK(sols[4]["n"] == 7);
    CHECK(sols[4]["m"] == 3);
}

TEST_CASE("format_digits") {
    CHECK(format_digits(BigInt(277)) == "277");
    CHECK(format_digits(BigInt(277), 5) == "277");
    CHECK(format_digits(BigInt("123456789"), 4) == "1234...(9 digits)");
    CHECK(format_digits(BigInt("-123456789"), 4) == "-1234...(9 digits)");
}
