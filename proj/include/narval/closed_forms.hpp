#pragma once

// Closed-form p-adic valuations of recurrence terms, written as residue-class
// rule tables, plus the oracles that check them: direct valuations of the
// terms, the mod 3^{n+3} congruence lift for a_{8s*3^n}, and the dominance
// bound for nu_3(a_n).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "narval/padic.hpp"
#include "narval/sequence.hpp"

namespace narval {

class CapExceeded : public std::runtime_error {
public:
    CapExceeded(Index n, std::uint64_t cap);

    Index index() const noexcept { return index_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    Index index_;
    std::uint64_t cap_;
};

namespace formula {

struct Constant {
    std::uint64_t value;
    bool operator==(const Constant&) const = default;
};

/// nu_p(n + shift) + offset
struct ShiftPlus {
    std::uint64_t shift;
    std::int64_t offset;
    bool operator==(const ShiftPlus&) const = default;
};

/// nu_p((n + shifts[0]) (n + shifts[1])) + offset, evaluated as a sum.
struct ProductPlus {
    std::array<std::uint64_t, 2> shifts;
    std::int64_t offset;
    bool operator==(const ProductPlus&) const = default;
};

}  // namespace formula

using Formula = std::variant<formula::Constant, formula::ShiftPlus, formula::ProductPlus>;

/// One displayed case: n in `residues` (mod `modulus`) maps to `formula`.
struct ValuationRule {
    std::string label;
    std::uint64_t modulus;
    std::vector<std::uint64_t> residues;
    Formula formula;

    bool operator==(const ValuationRule&) const = default;
};

/// Upper limit on the exponent used by the modular direct valuation:
/// K(n) = log_multiplier * ilog(p, n) + slack.
struct CapPolicy {
    std::uint64_t log_multiplier = 1;
    std::uint64_t slack = 6;

    bool operator==(const CapPolicy&) const = default;
};

class RuleTable {
public:
    /// Validates that every rule modulus divides `modulus`, that the expanded
    /// residue classes partition Z/modulus, that shifted arguments are
    /// multiples of p, and that no rule can produce a negative valuation.
    /// Throws std::invalid_argument otherwise.
    RuleTable(std::string sequence, std::uint64_t p, std::uint64_t modulus,
              std::vector<ValuationRule> rules, Index domain_start = 1, CapPolicy cap = {});

    const std::string& sequence() const noexcept { return sequence_; }
    std::uint64_t prime() const noexcept { return p_; }
    std::uint64_t modulus() const noexcept { return modulus_; }
    Index domain_start() const noexcept { return domain_start_; }
    const CapPolicy& cap_policy() const noexcept { return cap_; }
    const std::vector<ValuationRule>& rules() const noexcept { return rules_; }

    /// Index into rules() of the rule covering n mod modulus().
    std::size_t rule_for(Index n) const { return rule_of_residue_[n % modulus_]; }

    /// K(n) for the modular direct valuation, clamped so p^K fits in 63 bits.
    std::uint64_t cap_for(Index n) const;

    bool operator==(const RuleTable& rhs) const {
        return sequence_ == rhs.sequence_ && p_ == rhs.p_ && modulus_ == rhs.modulus_ &&
               rules_ == rhs.rules_ && domain_start_ == rhs.domain_start_ && cap_ == rhs.cap_;
    }

private:
    std::string sequence_;
    std::uint64_t p_;
    std::uint64_t modulus_;
    std::vector<ValuationRule> rules_;
    Index domain_start_;
    CapPolicy cap_;
    std::vector<std::size_t> rule_of_residue_;
};

/// nu_3 of the Narayana numbers: seven cases over residues mod 24.
const RuleTable& narayana_table();
/// nu_2(F_n), cases mod 12.
const RuleTable& fibonacci_table();
/// nu_2(T_n), cases mod 16.
const RuleTable& tribonacci_table();
/// nu_3(t_n), cases mod 6.
const RuleTable& tripell_table();

/// The rule table for a built-in sequence name, if any.
const RuleTable* table_for(const std::string& sequence);

/// Evaluates the table at n. Throws std::invalid_argument when n < domain_start.
Valuation closed_valuation(const RuleTable& table, Index n);

/// Terms up to this index are valued exactly; beyond it the modular route is used.
inline constexpr Index kExactValuationLimit = 2000;

/// nu_p(u_n). Small n is valued exactly. Larger n uses u_n mod p^cap and
/// throws CapExceeded if the residue vanishes; `cap` defaults to ilog(p, n) + 6.
Valuation direct_valuation(const RecurrenceSpec& spec, Index n, std::uint64_t p,
                           std::optional<std::uint64_t> cap = std::nullopt);

struct Mismatch {
    Index n;
    Valuation closed;
    Valuation direct;

    bool operator==(const Mismatch&) const = default;
};

struct TableReport {
    Index lo = 0;
    Index hi = 0;
    std::vector<Mismatch> mismatches;
    /// Hits per rule, parallel to RuleTable::rules().
    std::vector<std::uint64_t> hits;

    bool passed() const noexcept { return mismatches.empty(); }
    std::uint64_t checked() const noexcept { return hi - lo + 1; }
};

struct SweepOptions {
    unsigned workers = 1;
    /// Indices per work unit; progress is reported once per chunk.
    Index chunk = 10'000;
    /// Called in index order after each chunk with the last index covered.
    std::function<void(Index)> progress;
};

/// Compares closed_valuation with the direct valuation for every n in [lo, hi].
/// Direct values come from a streamed window of u_n mod p^cap_for(hi); a
/// residue that vanishes mod p^cap_for(n) raises CapExceeded.
TableReport verify_table(const RuleTable& table, const RecurrenceSpec& spec, Index lo, Index hi,
                         const SweepOptions& options = {});

struct CongruenceWitness {
    Index index;
    std::uint64_t actual;
    std::uint64_t expected;

    bool holds() const noexcept { return actual == expected; }
};

struct Prop1Result {
    std::uint64_t s;
    std::uint64_t n;
    std::uint64_t modulus;
    std::array<CongruenceWitness, 3> witnesses;

    bool passed() const noexcept {
        return witnesses[0].holds() && witnesses[1].holds() && witnesses[2].holds();
    }
};

/// Checks, modulo 3^{n+3}:
///   a_{8s 3^n}     = 2s 3^{n+2}
///   a_{8s 3^n + 1} = 1 + s 3^{n+1} + 2s 3^{n+2}
///   a_{8s 3^n + 2} = 1 + 2s 3^{n+2}
/// Throws std::invalid_argument for s < 1 or n < 1, std::overflow_error when
/// the index or modulus leaves 64 bits.
Prop1Result verify_prop1(std::uint64_t s, std::uint64_t n);

/// nu_3(n) + nu_3(n+1) + nu_3(n+3) + nu_3(n+8) + 6, an upper bound for nu_3(a_n).
std::uint64_t narayana_upper_bound(Index n);

}  // namespace narval
