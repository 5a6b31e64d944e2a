#include "narval/closed_forms.hpp"

#include <algorithm>
#include <future>
#include <limits>

namespace narval {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (out > std::numeric_limits<std::uint64_t>::max() / base)
            throw std::overflow_error("prime power exceeds 64 bits");
        out *= base;
    }
    return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) throw std::overflow_error("index overflow");
    return a + b;
}

std::uint64_t finite_nu(std::uint64_t x, std::uint64_t p) { return nu(x, p).value(); }

// Lower bound of nu_p(n + shift) over n = residue (mod modulus), n >= 1.
std::uint64_t min_shift_valuation(std::uint64_t residue, std::uint64_t shift, std::uint64_t modulus,
                                  std::uint64_t p) {
    const std::uint64_t e = finite_nu(modulus, p);
    const std::uint64_t t = (residue + shift % modulus) % modulus;
    return t == 0 ? e : std::min(finite_nu(t, p), e);
}

std::int64_t apply_offset(std::uint64_t v, std::int64_t offset) {
    const std::int64_t total = static_cast<std::int64_t>(v) + offset;
    if (total < 0) throw std::logic_error("rule produced a negative valuation");
    return total;
}

// Valuation of a nonzero residue modulo p^cap, or CapExceeded.
Valuation capped_valuation(std::uint64_t residue, std::uint64_t p, std::uint64_t cap_power, Index n,
                           std::uint64_t cap) {
    if (residue % cap_power == 0) throw CapExceeded(n, cap);
    return nu(residue, p);
}

struct ChunkResult {
    std::vector<Mismatch> mismatches;
    std::vector<std::uint64_t> hits;
};

ChunkResult sweep_chunk(const RuleTable& table, const RecurrenceSpec& spec, Index lo, Index hi,
                        std::uint64_t modulus) {
    ChunkResult out;
    out.hits.assign(table.rules().size(), 0);
    const std::uint64_t p = table.prime();
    ResidueWindow window = window_mod(spec, lo, modulus);
    for (Index n = lo;; ++n) {
        const std::uint64_t cap = table.cap_for(n);
        const Valuation direct =
            capped_valuation(window.values.front(), p, checked_pow(p, cap), n, cap);
        const Valuation closed = closed_valuation(table, n);
        ++out.hits[table.rule_for(n)];
        if (closed != direct) out.mismatches.push_back({n, closed, direct});
        if (n == hi) break;
        advance(spec, window, modulus);
    }
    return out;
}

}  // namespace

CapExceeded::CapExceeded(Index n, std::uint64_t cap)
    : std::runtime_error("valuation cap " + std::to_string(cap) + " exceeded at n = " + std::to_string(n)),
      index_(n),
      cap_(cap) {}

RuleTable::RuleTable(std::string sequence, std::uint64_t p, std::uint64_t modulus,
                     std::vector<ValuationRule> rules, Index domain_start, CapPolicy cap)
    : sequence_(std::move(sequence)),
      p_(p),
      modulus_(modulus),
      rules_(std::move(rules)),
      domain_start_(domain_start),
      cap_(cap),
      rule_of_residue_(modulus, kUnassigned) {
    if (!is_prime(p_)) throw std::invalid_argument("rule table prime is not prime");
    if (modulus_ == 0) throw std::invalid_argument("rule table modulus must be positive");
    if (domain_start_ < 1) throw std::invalid_argument("rule table domain must start at 1 or later");

    for (std::size_t idx = 0; idx < rules_.size(); ++idx) {
        const ValuationRule& rule = rules_[idx];
        if (rule.modulus == 0 || modulus_ % rule.modulus != 0)
            throw std::invalid_argument(rule.label + ": rule modulus must divide the table modulus");
        const bool shifted = !std::holds_alternative<formula::Constant>(rule.formula);
        if (shifted && rule.modulus % p_ != 0)
            throw std::invalid_argument(rule.label + ": shifted rule needs a modulus divisible by p");

        for (std::uint64_t r : rule.residues) {
            if (r >= rule.modulus) throw std::invalid_argument(rule.label + ": residue out of range");
            for (std::uint64_t lifted = r; lifted < modulus_; lifted += rule.modulus) {
                if (rule_of_residue_[lifted] != kUnassigned)
                    throw std::invalid_argument(rule.label + ": residue " + std::to_string(lifted) +
                                                " already covered");
                rule_of_residue_[lifted] = idx;

                const auto check_shift = [&](std::uint64_t shift) {
                    if ((lifted + shift) % p_ != 0)
                        throw std::invalid_argument(rule.label + ": shifted argument not divisible by p");
                    return min_shift_valuation(lifted, shift, modulus_, p_);
                };
                std::int64_t floor_value = 0;
                std::int64_t offset = 0;
                if (const auto* c = std::get_if<formula::Constant>(&rule.formula)) {
                    floor_value = static_cast<std::int64_t>(c->value);
                } else if (const auto* s = std::get_if<formula::ShiftPlus>(&rule.formula)) {
                    floor_value = static_cast<std::int64_t>(check_shift(s->shift));
                    offset = s->offset;
                } else {
                    const auto& pp = std::get<formula::ProductPlus>(rule.formula);
                    floor_value = static_cast<std::int64_t>(check_shift(pp.shifts[0]) + check_shift(pp.shifts[1]));
                    offset = pp.offset;
                }
                if (floor_value + offset < 0)
                    throw std::invalid_argument(rule.label + ": formula can be negative on residue " +
                                                std::to_string(lifted));
            }
        }
    }
    for (std::uint64_t r = 0; r < modulus_; ++r) {
        if (rule_of_residue_[r] == kUnassigned)
            throw std::invalid_argument("residue " + std::to_string(r) + " is not covered by any rule");
    }
}

std::uint64_t RuleTable::cap_for(Index n) const {
    const std::uint64_t wanted = cap_.log_multiplier * ilog(p_, std::max<Index>(n, 1)) + cap_.slack;
    const std::uint64_t limit = ilog(p_, std::uint64_t{1} << 62);
    return std::min(wanted, limit);
}

const RuleTable& narayana_table() {
    using namespace formula;
    static const RuleTable table{
        "narayana", 3, 24,
        {
            {"n = 1,2,3,4,6 (mod 8)", 8, {1, 2, 3, 4, 6}, Constant{0}},
            {"n = 5,7,13,15 (mod 24)", 24, {5, 7, 13, 15}, Constant{1}},
            {"n = 8 (mod 24)", 24, {8}, Constant{2}},
            {"n = 23 (mod 24)", 24, {23}, ShiftPlus{1, 1}},
            {"n = 21 (mod 24)", 24, {21}, ShiftPlus{3, 1}},
            {"n = 0 (mod 24)", 24, {0}, ShiftPlus{0, 2}},
            {"n = 16 (mod 24)", 24, {16}, ShiftPlus{8, 2}},
        },
        1, CapPolicy{1, 6}};
    return table;
}

const RuleTable& fibonacci_table() {
    using namespace formula;
    static const RuleTable table{
        "fibonacci", 2, 12,
        {
            {"n = 1,2 (mod 3)", 3, {1, 2}, Constant{0}},
            {"n = 3 (mod 6)", 6, {3}, Constant{1}},
            {"n = 6 (mod 12)", 12, {6}, Constant{3}},
            {"n = 0 (mod 12)", 12, {0}, ShiftPlus{0, 2}},
        },
        1, CapPolicy{1, 6}};
    return table;
}

const RuleTable& tribonacci_table() {
    using namespace formula;
    static const RuleTable table{
        "tribonacci", 2, 16,
        {
            {"n = 1,2 (mod 4)", 4, {1, 2}, Constant{0}},
            {"n = 3,11 (mod 16)", 16, {3, 11}, Constant{1}},
            {"n = 4,8 (mod 16)", 16, {4, 8}, Constant{2}},
            {"n = 7 (mod 16)", 16, {7}, Constant{3}},
            {"n = 0 (mod 16)", 16, {0}, ShiftPlus{0, -1}},
            {"n = 12 (mod 16)", 16, {12}, ShiftPlus{4, -1}},
            {"n = 15 (mod 16)", 16, {15}, ProductPlus{{1, 17}, -3}},
        },
        1, CapPolicy{2, 6}};
    return table;
}

const RuleTable& tripell_table() {
    using namespace formula;
    static const RuleTable table{
        "tripell", 3, 6,
        {
            {"n = 1,2,3,4 (mod 6)", 6, {1, 2, 3, 4}, Constant{0}},
            {"n = 0 (mod 6)", 6, {0}, ShiftPlus{0, 0}},
            {"n = 5 (mod 6)", 6, {5}, ShiftPlus{1, 0}},
        },
        1, CapPolicy{1, 6}};
    return table;
}

const RuleTable* table_for(const std::string& sequence) {
    for (const RuleTable* t : {&narayana_table(), &fibonacci_table(), &tribonacci_table(), &tripell_table()}) {
        if (t->sequence() == sequence) return t;
    }
    return nullptr;
}

Valuation closed_valuation(const RuleTable& table, Index n) {
    if (n < table.domain_start())
        throw std::invalid_argument("closed form is defined for n >= " + std::to_string(table.domain_start()));
    const std::uint64_t p = table.prime();
    const Formula& f = table.rules()[table.rule_for(n)].formula;
    if (const auto* c = std::get_if<formula::Constant>(&f)) return Valuation::finite(c->value);
    if (const auto* s = std::get_if<formula::ShiftPlus>(&f)) {
        const auto v = finite_nu(checked_add(n, s->shift), p);
        return Valuation::finite(static_cast<std::uint64_t>(apply_offset(v, s->offset)));
    }
    const auto& pp = std::get<formula::ProductPlus>(f);
    const auto v = finite_nu(checked_add(n, pp.shifts[0]), p) + finite_nu(checked_add(n, pp.shifts[1]), p);
    return Valuation::finite(static_cast<std::uint64_t>(apply_offset(v, pp.offset)));
}

Valuation direct_valuation(const RecurrenceSpec& spec, Index n, std::uint64_t p,
                           std::optional<std::uint64_t> cap) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (n <= kExactValuationLimit) return nu(term(spec, n), p);
    const std::uint64_t k = cap.value_or(ilog(p, n) + 6);
    const std::uint64_t power = checked_pow(p, k);
    if (power < 2) throw std::invalid_argument("valuation cap must be positive");
    return capped_valuation(term_mod(spec, n, power), p, power, n, k);
}

TableReport verify_table(const RuleTable& table, const RecurrenceSpec& spec, Index lo, Index hi,
                         const SweepOptions& options) {
    if (lo < table.domain_start())
        throw std::invalid_argument("verify_table range must start at the table's domain start");
    if (lo > hi) throw std::invalid_argument("verify_table requires lo <= hi");

    const std::uint64_t modulus = checked_pow(table.prime(), table.cap_for(hi));
    const Index chunk = std::max<Index>(options.chunk, 1);
    const unsigned workers = std::max(options.workers, 1u);

    TableReport report;
    report.lo = lo;
    report.hi = hi;
    report.hits.assign(table.rules().size(), 0);

    std::vector<std::pair<Index, Index>> ranges;
    for (Index a = lo;; a += chunk) {
        const Index b = (hi - a < chunk - 1) ? hi : a + chunk - 1;
        ranges.emplace_back(a, b);
        if (b == hi) break;
    }

    const auto merge = [&](ChunkResult&& part, Index last) {
        for (std::size_t i = 0; i < part.hits.size(); ++i) report.hits[i] += part.hits[i];
        report.mismatches.insert(report.mismatches.end(), part.mismatches.begin(), part.mismatches.end());
        if (options.progress) options.progress(last);
    };

    for (std::size_t first = 0; first < ranges.size(); first += workers) {
        const std::size_t last = std::min(ranges.size(), first + workers);
        if (workers == 1) {
            merge(sweep_chunk(table, spec, ranges[first].first, ranges[first].second, modulus),
                  ranges[first].second);
            continue;
        }
        std::vector<std::future<ChunkResult>> pending;
        for (std::size_t i = first; i < last; ++i) {
            pending.push_back(std::async(std::launch::async, sweep_chunk, std::cref(table), std::cref(spec),
                                         ranges[i].first, ranges[i].second, modulus));
        }
        for (std::size_t i = first; i < last; ++i) merge(pending[i - first].get(), ranges[i].second);
    }
    return report;
}

Prop1Result verify_prop1(std::uint64_t s, std::uint64_t n) {
    if (s < 1) throw std::invalid_argument("verify_prop1 requires s >= 1");
    if (n < 1) throw std::invalid_argument("verify_prop1 requires n >= 1");
    const std::uint64_t modulus = checked_pow(3, checked_add(n, 3));
    const std::uint64_t p3n = checked_pow(3, n);
    if (s > std::numeric_limits<std::uint64_t>::max() / 8 / p3n) throw std::overflow_error("index overflow");
    const Index index = 8 * s * p3n;
    checked_add(index, 2);

    const std::uint64_t sm = s % modulus;
    const std::uint64_t two_s_3n2 = mul_mod(add_mod(sm, sm, modulus), (9 * p3n) % modulus, modulus);
    const std::uint64_t s_3n1 = mul_mod(sm, (3 * p3n) % modulus, modulus);
    const std::uint64_t one = 1 % modulus;

    const ResidueWindow w = window_mod(narayana(), index, modulus);
    Prop1Result out{s, n, modulus, {}};
    out.witnesses[0] = {index, w.values[0], two_s_3n2};
    out.witnesses[1] = {index + 1, w.values[1], add_mod(add_mod(one, s_3n1, modulus), two_s_3n2, modulus)};
    out.witnesses[2] = {index + 2, w.values[2], add_mod(one, two_s_3n2, modulus)};
    return out;
}

std::uint64_t narayana_upper_bound(Index n) {
    if (n < 1) throw std::invalid_argument("narayana_upper_bound requires n >= 1");
    return finite_nu(n, 3) + finite_nu(checked_add(n, 1), 3) + finite_nu(checked_add(n, 3), 3) +
           finite_nu(checked_add(n, 8), 3) + 6;
}

}  // namespace narval
