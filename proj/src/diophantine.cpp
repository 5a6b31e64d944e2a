#include "narval/diophantine.hpp"

#include <algorithm>
#include <stdexcept>

#include <mpfr.h>

namespace narval {

namespace {

constexpr mpfr_prec_t kPrecision = 256;

class Real {
public:
    Real() { mpfr_init2(value_, kPrecision); }
    ~Real() { mpfr_clear(value_); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;

    mpfr_ptr get() noexcept { return value_; }
    mpfr_srcptr get() const noexcept { return value_; }

private:
    mpfr_t value_;
};

mpfr_rnd_t opposite(mpfr_rnd_t mode) { return mode == MPFR_RNDU ? MPFR_RNDD : MPFR_RNDU; }

// log(11 + m log(m/2) / log(alpha)) / log(3), rounded in direction `mode`.
// Rounding up uses `alpha_bound` = lo (log(lo) underestimates log(alpha));
// rounding down uses hi.
void condition_rhs(Real& out, std::uint64_t m, const Rational& alpha_bound, mpfr_rnd_t mode) {
    const mpfr_rnd_t down = opposite(mode);
    Real half_m, log_alpha, log3;
    mpfr_set_ui(half_m.get(), m, MPFR_RNDN);  // exact
    mpfr_div_ui(half_m.get(), half_m.get(), 2, MPFR_RNDN);  // exact
    mpfr_log(half_m.get(), half_m.get(), mode);

    mpfr_set_q(log_alpha.get(), alpha_bound.get_mpq_t(), down);
    mpfr_log(log_alpha.get(), log_alpha.get(), down);
    if (mpfr_sgn(log_alpha.get()) <= 0) throw std::logic_error("root bracket must lie above 1");

    mpfr_div(out.get(), half_m.get(), log_alpha.get(), mode);
    mpfr_mul_ui(out.get(), out.get(), m, mode);
    mpfr_add_ui(out.get(), out.get(), 11, mode);
    mpfr_log(out.get(), out.get(), mode);

    mpfr_set_ui(log3.get(), 3, MPFR_RNDN);
    mpfr_log(log3.get(), log3.get(), down);
    mpfr_div(out.get(), out.get(), log3.get(), mode);
}

Rational ratio(std::uint64_t num, unsigned long den) {
    Rational q(static_cast<unsigned long>(num), den);
    q.canonicalize();
    return q;
}

// floor(m/8 - ilog(3, m)/4 - 7/4)
std::int64_t condition_lhs(std::uint64_t m) {
    const Rational value = ratio(m, 8) - ratio(ilog(3, m), 4) - Rational(7, 4);
    return floor(value).get_si();
}

Rational power(const Rational& base, std::uint64_t exp) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
    out.canonicalize();
    return out;
}

// base^exp for a signed exponent.
Rational signed_power(const Rational& base, std::int64_t exp) {
    if (exp >= 0) return power(base, static_cast<std::uint64_t>(exp));
    return 1 / power(base, static_cast<std::uint64_t>(-exp));
}

BigInt factorial(std::uint64_t m) {
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), m);
    return out;
}

}  // namespace

Rational narayana_char_poly(const Rational& x) { return x * x * x - x * x - 1; }

Rational default_root_width() { return Rational(1, BigInt("1000000000000")); }

RootInterval isolate_alpha(const Rational& width) {
    if (sgn(width) <= 0) throw std::invalid_argument("root width must be positive");
    RootInterval root{Rational(1), Rational(2), width};
    while (root.hi - root.lo > width) {
        Rational mid = (root.lo + root.hi) / 2;
        const int sign = sgn(narayana_char_poly(mid));
        if (sign == 0) throw std::logic_error("x^3 - x^2 - 1 has no rational root");
        (sign < 0 ? root.lo : root.hi) = std::move(mid);
    }
    return root;
}

GrowthCheck check_growth(Index n, const RootInterval& root) {
    if (n < 1) throw std::invalid_argument("check_growth requires n >= 1");
    const Rational value(term(narayana(), n));
    const auto exp = static_cast<std::int64_t>(n);
    return {n, signed_power(root.lo, exp - 3) <= value, value <= signed_power(root.hi, exp - 1)};
}

std::vector<GrowthCheck> check_growth_upto(Index max_n, const RootInterval& root) {
    std::vector<GrowthCheck> failures;
    if (max_n < 1) return failures;
    Rational lower = signed_power(root.lo, -2);
    Rational upper = 1;
    for (const auto& entry : term_stream(narayana(), 1, max_n)) {
        const Rational value(entry.value);
        const GrowthCheck check{entry.n, lower <= value, value <= upper};
        if (!check.passed()) failures.push_back(check);
        lower *= root.lo;
        upper *= root.hi;
    }
    return failures;
}

BoundReport derive_bounds(const RootInterval& root) {
    if (root.hi - root.lo > Rational(1, 1000000))
        throw std::invalid_argument("derive_bounds needs a root bracket no wider than 1e-6");

    BoundReport report{0, 0, 0, root, {}};
    std::vector<BoundTraceRow> rows;
    Real upper, lower;
    for (std::uint64_t m = 6; m <= kBoundSanityCap; ++m) {
        const std::int64_t lhs = condition_lhs(m);
        condition_rhs(upper, m, root.lo, MPFR_RNDU);
        condition_rhs(lower, m, root.hi, MPFR_RNDD);
        const bool feasible = mpfr_cmp_si(upper.get(), lhs) >= 0;
        const bool stable = feasible == (mpfr_cmp_si(lower.get(), lhs) >= 0);
        if (feasible) report.last_feasible_m = m;
        rows.push_back({m, lhs, mpfr_get_d(lower.get(), MPFR_RNDD), mpfr_get_d(upper.get(), MPFR_RNDU), feasible,
                        stable});
    }
    if (rows.back().feasible) throw std::runtime_error("search-bound condition never fails below the sanity cap");
    if (report.last_feasible_m == 0) throw std::logic_error("search-bound condition excludes every m >= 6");

    report.m_max = report.last_feasible_m + 1;
    rows.resize(report.m_max - 5);
    report.per_m_trace = std::move(rows);

    // n < 3 + m log(m/2) / log(alpha) for a_n = m! with m >= 6; the bound grows with m.
    Real n_bound;
    Real half_m, log_alpha;
    mpfr_set_ui(half_m.get(), report.m_max, MPFR_RNDN);
    mpfr_div_ui(half_m.get(), half_m.get(), 2, MPFR_RNDN);
    mpfr_log(half_m.get(), half_m.get(), MPFR_RNDU);
    mpfr_set_q(log_alpha.get(), root.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_log(log_alpha.get(), log_alpha.get(), MPFR_RNDD);
    mpfr_div(n_bound.get(), half_m.get(), log_alpha.get(), MPFR_RNDU);
    mpfr_mul_ui(n_bound.get(), n_bound.get(), report.m_max, MPFR_RNDU);
    mpfr_add_ui(n_bound.get(), n_bound.get(), 3, MPFR_RNDU);
    report.n_max = mpfr_get_ui(n_bound.get(), MPFR_RNDD);
    return report;
}

FactorialSearch search_factorial(const BoundReport& bounds) {
    FactorialSearch out;
    out.bounds = bounds;

    // m <= 5: every n with a_n <= 5! = 120.
    const BigInt small_limit = factorial(5);
    for (Index n = 1;; ++n) {
        const BigInt value = term(narayana(), n);
        if (value > small_limit) break;
        for (std::uint64_t m = 1; m <= 5; ++m) {
            if (value == factorial(m)) out.small_m.push_back({n, m});
        }
    }

    // 6 <= m <= m_max: merged scan of the non-decreasing a_n against increasing m!.
    std::uint64_t m = 6;
    BigInt fact = factorial(m);
    BigInt previous = 0;
    for (const auto& entry : term_stream(narayana(), 1, bounds.n_max)) {
        if (entry.value < previous) throw std::logic_error("Narayana terms must be non-decreasing for n >= 1");
        previous = entry.value;
        while (m <= bounds.m_max && fact < entry.value) {
            ++m;
            fact *= m;
        }
        if (m > bounds.m_max) break;
        if (fact == entry.value) out.large_m.push_back({entry.n, m});
    }

    out.solutions = out.small_m;
    out.solutions.insert(out.solutions.end(), out.large_m.begin(), out.large_m.end());
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

std::vector<SolutionPair> solve_factorial() {
    return search_factorial(derive_bounds(isolate_alpha(default_root_width()))).solutions;
}

}  // namespace narval
