#pragma once

// a_n = m! over the Narayana numbers: an exact bracket for the real root of
// x^3 - x^2 - 1, the growth check it supports, the search bounds on (n, m),
// and the exhaustive search inside them.

#include <cstdint>
#include <vector>

#include "narval/padic.hpp"
#include "narval/sequence.hpp"

namespace narval {

/// x^3 - x^2 - 1
Rational narayana_char_poly(const Rational& x);

/// lo < alpha < hi with f(lo) < 0 < f(hi) and hi - lo <= width.
struct RootInterval {
    Rational lo;
    Rational hi;
    Rational width;
};

/// Exact bisection on [1, 2]. Throws std::invalid_argument when width <= 0.
RootInterval isolate_alpha(const Rational& width);

struct GrowthCheck {
    Index n;
    bool lower_holds;  // lo^(n-3) <= a_n
    bool upper_holds;  // a_n <= hi^(n-1)

    bool passed() const noexcept { return lower_holds && upper_holds; }
};

/// lo^(n-3) <= a_n <= hi^(n-1) with exact rational powers (negative
/// exponents use reciprocals). Throws std::invalid_argument when n < 1.
GrowthCheck check_growth(Index n, const RootInterval& root);

/// check_growth for every 1 <= n <= max_n, sharing powers between steps.
/// Returns only the failing checks.
std::vector<GrowthCheck> check_growth_upto(Index max_n, const RootInterval& root);

struct BoundTraceRow {
    std::uint64_t m;
    /// floor(m/8 - ilog(3, m)/4 - 7/4), exact.
    std::int64_t lhs;
    /// Certified enclosure of log(11 + m log(m/2) / log(alpha)) / log(3),
    /// rounded outward to doubles for display.
    double rhs_lower;
    double rhs_upper;
    /// lhs <= rhs_upper: m is not excluded.
    bool feasible;
    /// The verdict is the same for every alpha in the root interval.
    bool stable;
};

struct BoundReport {
    /// Search bound on m: the first m >= 6 at which the condition fails,
    /// with the condition failing for every larger m up to kBoundSanityCap.
    std::uint64_t m_max;
    /// Largest m >= 6 that the condition does not exclude.
    std::uint64_t last_feasible_m;
    /// floor(3 + m_max log(m_max/2) / log(lo)), rounded up before the floor.
    std::uint64_t n_max;
    RootInterval root;
    /// One row per m in [6, m_max].
    std::vector<BoundTraceRow> per_m_trace;
};

inline constexpr std::uint64_t kBoundSanityCap = 10'000;

/// Requires root.hi - root.lo <= 10^-6 (std::invalid_argument otherwise).
/// Throws std::runtime_error if the condition still holds at kBoundSanityCap.
BoundReport derive_bounds(const RootInterval& root);

struct SolutionPair {
    Index n;
    std::uint64_t m;

    bool operator==(const SolutionPair&) const = default;
    auto operator<=>(const SolutionPair&) const = default;
};

struct FactorialSearch {
    BoundReport bounds;
    std::vector<SolutionPair> small_m;  // m <= 5
    std::vector<SolutionPair> large_m;  // 6 <= m <= m_max
    std::vector<SolutionPair> solutions;
};

/// Exhaustive two-phase search within `bounds`, exact throughout.
FactorialSearch search_factorial(const BoundReport& bounds);

/// Solutions of a_n = m! in positive integers, sorted by n.
std::vector<SolutionPair> solve_factorial();

/// Root width used by solve_factorial and the CLI: 10^-12.
Rational default_root_width();

}  // namespace narval
