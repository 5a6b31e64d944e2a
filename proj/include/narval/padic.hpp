#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace narval {

using BigInt = mpz_class;

/// Exact rational, always in lowest terms with positive denominator.
using Rational = mpq_class;

/// Largest prime accepted by the trial-division primality check.
inline constexpr std::uint64_t kMaxPrime = 1ULL << 31;

/// p-adic valuation: a finite exponent, or infinity for the valuation of 0.
class Valuation {
public:
    static constexpr Valuation finite(std::uint64_t v) noexcept { return Valuation(v, false); }
    static constexpr Valuation infinite() noexcept { return Valuation(0, true); }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }

    /// Throws std::logic_error on the infinite valuation.
    std::uint64_t value() const;

    // Valuations add under multiplication; infinity absorbs.
    constexpr Valuation operator+(Valuation rhs) const noexcept {
        if (infinite_ || rhs.infinite_) return infinite();
        return finite(value_ + rhs.value_);
    }

    constexpr bool operator==(const Valuation&) const = default;
    constexpr std::strong_ordering operator<=>(const Valuation& rhs) const noexcept {
        if (infinite_ || rhs.infinite_) return infinite_ <=> rhs.infinite_;
        return value_ <=> rhs.value_;
    }

    /// "infinity" or the decimal value.
    std::string to_string() const;

private:
    constexpr Valuation(std::uint64_t v, bool inf) noexcept : value_(v), infinite_(inf) {}

    std::uint64_t value_;
    bool infinite_;
};

/// Trial division; throws std::invalid_argument for p > kMaxPrime.
bool is_prime(std::uint64_t p);

/// nu_p(x), ignoring the sign of x. Throws std::invalid_argument when p is not prime.
Valuation nu(const BigInt& x, std::uint64_t p);
Valuation nu(std::uint64_t x, std::uint64_t p);

/// Largest k with p^k <= m, by integer powering. Requires p >= 2 and m >= 1.
std::uint64_t ilog(std::uint64_t p, std::uint64_t m);

/// Legendre's formula: sum over i >= 1 of floor(m / p^i).
std::uint64_t nu_factorial(std::uint64_t m, std::uint64_t p);

struct LegendreBounds {
    Rational lower;
    Rational upper;
};

/// lower = m/(p-1) - ilog(p, m) - 1 and upper = (m-1)/(p-1); these bracket nu_p(m!).
LegendreBounds nu_factorial_bounds(std::uint64_t m, std::uint64_t p);

/// floor(q) as an integer.
BigInt floor(const Rational& q);

}  // namespace narval
