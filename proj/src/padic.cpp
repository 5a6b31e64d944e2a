#include "narval/padic.hpp"

#include <stdexcept>

namespace narval {

namespace {

void require_prime(std::uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

Rational make_rational(std::int64_t num, std::uint64_t den) {
    Rational q(BigInt(static_cast<long>(num)), BigInt(static_cast<unsigned long>(den)));
    q.canonicalize();
    return q;
}

}  // namespace

std::uint64_t Valuation::value() const {
    if (infinite_) throw std::logic_error("infinite valuation has no finite value");
    return value_;
}

std::string Valuation::to_string() const {
    return infinite_ ? std::string("infinity") : std::to_string(value_);
}

bool is_prime(std::uint64_t p) {
    if (p > kMaxPrime) throw std::invalid_argument("primality check is capped at 2^31");
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (std::uint64_t d = 3; d * d <= p; d += 2) {
        if (p % d == 0) return false;
    }
    return true;
}

Valuation nu(const BigInt& x, std::uint64_t p) {
    require_prime(p);
    if (sgn(x) == 0) return Valuation::infinite();
    BigInt rest;
    const BigInt prime(static_cast<unsigned long>(p));
    const auto v = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t());
    return Valuation::finite(v);
}

Valuation nu(std::uint64_t x, std::uint64_t p) {
    require_prime(p);
    if (x == 0) return Valuation::infinite();
    std::uint64_t v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return Valuation::finite(v);
}

std::uint64_t ilog(std::uint64_t p, std::uint64_t m) {
    if (p < 2) throw std::invalid_argument("ilog requires base >= 2");
    if (m < 1) throw std::invalid_argument("ilog requires m >= 1");
    std::uint64_t k = 0;
    std::uint64_t power = 1;
    while (power <= m / p) {
        power *= p;
        ++k;
    }
    return k;
}

std::uint64_t nu_factorial(std::uint64_t m, std::uint64_t p) {
    if (m < 1) throw std::invalid_argument("nu_factorial requires m >= 1");
    require_prime(p);
    std::uint64_t sum = 0;
    for (std::uint64_t q = m / p; q != 0; q /= p) sum += q;
    return sum;
}

LegendreBounds nu_factorial_bounds(std::uint64_t m, std::uint64_t p) {
    if (m < 1) throw std::invalid_argument("nu_factorial_bounds requires m >= 1");
    require_prime(p);
    const Rational lower = make_rational(static_cast<std::int64_t>(m), p - 1) -
                           Rational(static_cast<unsigned long>(ilog(p, m))) - 1;
    const Rational upper = make_rational(static_cast<std::int64_t>(m - 1), p - 1);
    return {lower, upper};
}

BigInt floor(const Rational& q) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

}  // namespace narval
