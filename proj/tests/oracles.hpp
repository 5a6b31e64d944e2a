#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// calls into the library's term, valuation or period code.

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace oracle {

struct Recurrence {
    std::vector<std::int64_t> coefficients;
    std::vector<std::int64_t> initials;
};

inline const Recurrence kNarayana{{1, 0, 1}, {0, 1, 1}};
inline const Recurrence kFibonacci{{1, 1}, {0, 1}};
inline const Recurrence kTribonacci{{1, 1, 1}, {0, 1, 1}};
inline const Recurrence kTripell{{2, 1, 1}, {0, 1, 2}};

/// u_0..u_{count-1} by the textbook recurrence over a growing vector.
inline std::vector<mpz_class> exact_terms(const Recurrence& r, std::size_t count) {
    std::vector<mpz_class> u;
    const std::size_t k = r.initials.size();
    for (std::size_t n = 0; n < count; ++n) {
        if (n < k) {
            u.emplace_back(static_cast<long>(r.initials[n]));
            continue;
        }
        mpz_class next = 0;
        for (std::size_t i = 1; i <= k; ++i) next += u[n - i] * static_cast<long>(r.coefficients[i - 1]);
        u.push_back(next);
    }
    return u;
}

/// u_0..u_{count-1} mod m by O(n) iteration with signed 128-bit accumulators.
inline std::vector<std::uint64_t> iterative_residues(const Recurrence& r, std::uint64_t m, std::uint64_t count) {
    const std::size_t k = r.initials.size();
    std::vector<__int128> coeff;
    for (auto c : r.coefficients) coeff.push_back(((static_cast<__int128>(c) % m) + m) % m);
    std::vector<std::uint64_t> u;
    u.reserve(count);
    for (std::uint64_t n = 0; n < count; ++n) {
        if (n < k) {
            u.push_back(static_cast<std::uint64_t>(((static_cast<__int128>(r.initials[n]) % m) + m) % m));
            continue;
        }
        __int128 next = 0;
        for (std::size_t i = 1; i <= k; ++i) next = (next + coeff[i - 1] * u[n - i]) % m;
        u.push_back(static_cast<std::uint64_t>(next));
    }
    return u;
}

inline std::uint64_t iterative_term_mod(const Recurrence& r, std::uint64_t n, std::uint64_t m) {
    return iterative_residues(r, m, n + 1).back();
}

/// nu_p(x) by repeated exact division; nullopt for x = 0.
inline std::optional<std::uint64_t> valuation_by_division(mpz_class x, unsigned long p) {
    if (x == 0) return std::nullopt;
    std::uint64_t v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

/// Least t with u_{n+t} = u_n (mod m) for every n below `horizon - t`,
/// searched over the list of residues rather than over states.
inline std::optional<std::uint64_t> period_by_shift(const Recurrence& r, std::uint64_t m, std::uint64_t horizon) {
    const std::vector<std::uint64_t> u = iterative_residues(r, m, horizon);
    for (std::uint64_t t = 1; 2 * t < horizon; ++t) {
        bool ok = true;
        for (std::uint64_t n = 0; n + t < horizon && ok; ++n) ok = u[n] == u[n + t];
        if (ok) return t;
    }
    return std::nullopt;
}

inline mpz_class factorial(unsigned long m) {
    mpz_class f = 1;
    for (unsigned long i = 2; i <= m; ++i) f *= i;
    return f;
}

}  // namespace oracle
