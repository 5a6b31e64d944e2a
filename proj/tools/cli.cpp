#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "narval/closed_forms.hpp"
#include "narval/diophantine.hpp"
#include "narval/padic.hpp"
#include "narval/sequence.hpp"
#include "narval/serialize.hpp"

namespace narval::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RecurrenceSpec sequence_named(const std::string& name) {
    auto spec = builtin_sequence(name);
    if (!spec) throw UsageError("unknown sequence: " + name);
    return *spec;
}

struct Options {
    std::string dump_table;

    std::string sequence;
    Index n = 0;
    std::uint64_t modulus = 0;
    bool has_modulus = false;
    std::size_t digits_cap = 0;

    std::uint64_t p = 0;
    std::string method = "closed";

    std::string target;
    Index max = 0;
    std::uint64_t s_max = 50;
    std::uint64_t n_max = 8;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 42;
    unsigned workers = 1;

    std::string problem;
    std::string format;
    Index from = 1;
    Index to = 1;
};

// ---- term / valuation / period -------------------------------------------

int cmd_term(const Options& o, std::ostream& out) {
    const RecurrenceSpec spec = sequence_named(o.sequence);
    if (o.has_modulus) {
        if (o.modulus < 2) throw UsageError("--mod must be at least 2");
        out << term_mod(spec, o.n, o.modulus) << '\n';
    } else {
        out << format_digits(term(spec, o.n), o.digits_cap) << '\n';
    }
    return kOk;
}

Valuation direct_for(const RecurrenceSpec& spec, Index n, std::uint64_t p) {
    const RuleTable* table = table_for(spec.name());
    if (table != nullptr && table->prime() == p && n >= 1) return direct_valuation(spec, n, p, table->cap_for(n));
    return direct_valuation(spec, n, p);
}

int cmd_valuation(const Options& o, std::ostream& out) {
    const RecurrenceSpec spec = sequence_named(o.sequence);
    const RuleTable* table = table_for(spec.name());
    const std::uint64_t p = o.p != 0 ? o.p : (table != nullptr ? table->prime() : 0);
    if (p == 0 || !is_prime(p)) throw UsageError("--p must be a prime");

    if (o.method == "direct") {
        out << direct_for(spec, o.n, p).to_string() << '\n';
        return kOk;
    }
    if (table == nullptr || table->prime() != p)
        throw UsageError("no closed form for " + spec.name() + " with p = " + std::to_string(p));
    if (o.n < table->domain_start())
        throw UsageError("closed form needs n >= " + std::to_string(table->domain_start()));
    const Valuation closed = closed_valuation(*table, o.n);
    if (o.method == "closed") {
        out << closed.to_string() << '\n';
        return kOk;
    }
    const Valuation direct = direct_for(spec, o.n, p);
    const bool agree = closed == direct;
    out << "closed=" << closed.to_string() << " direct=" << direct.to_string() << ' '
        << (agree ? "agree" : "disagree") << '\n';
    return agree ? kOk : kViolation;
}

int cmd_period(const Options& o, std::ostream& out, std::ostream& err) {
    const RecurrenceSpec spec = sequence_named(o.sequence);
    if (o.modulus < 2) throw UsageError("modulus must be at least 2");
    try {
        out << period_mod(spec, o.modulus) << '\n';
    } catch (const NotPurelyPeriodic& e) {
        err << "error: " << e.what() << '\n';
        return kViolation;
    }
    return kOk;
}

// ---- verify ---------------------------------------------------------------

int report_table(const RuleTable& table, const RecurrenceSpec& spec, Index hi, unsigned workers,
                 std::ostream& out, std::ostream& err) {
    SweepOptions sweep;
    sweep.workers = workers;
    sweep.progress = [&](Index last) {
        err << "progress: " << spec.name() << ' ' << last << '/' << hi << '\n';
    };
    out << spec.name() << ": nu_" << table.prime() << " over n in [1, " << hi << "]\n";
    TableReport report;
    try {
        report = verify_table(table, spec, 1, hi, sweep);
    } catch (const CapExceeded& e) {
        out << "  counterexample signal: " << e.what() << '\n';
        return kViolation;
    }
    for (std::size_t i = 0; i < table.rules().size(); ++i) {
        out << "  " << std::left << std::setw(26) << table.rules()[i].label << " hits=" << report.hits[i] << '\n';
    }
    for (const auto& m : report.mismatches) {
        out << "  mismatch n=" << m.n << " closed=" << m.closed.to_string() << " direct=" << m.direct.to_string()
            << '\n';
    }
    out << "  mismatches: " << report.mismatches.size() << '\n';
    return report.passed() ? kOk : kViolation;
}

int verify_narayana_table(const Options& o, std::ostream& out, std::ostream& err) {
    return report_table(narayana_table(), narayana(), o.max != 0 ? o.max : 100'000, o.workers, out, err);
}

int verify_tables(const Options& o, std::ostream& out, std::ostream& err) {
    const Index hi = o.max != 0 ? o.max : 10'000;
    int code = kOk;
    for (const auto* pair : {&fibonacci(), &tribonacci(), &tripell()}) {
        code = std::max(code, report_table(*table_for(pair->name()), *pair, hi, o.workers, out, err));
    }
    return code;
}

int verify_prop1_cmd(const Options& o, std::ostream& out) {
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    for (std::uint64_t n = 1; n <= o.n_max; ++n) {
        std::uint64_t passed_here = 0;
        for (std::uint64_t s = 1; s <= o.s_max; ++s) {
            const Prop1Result r = verify_prop1(s, n);
            for (const auto& w : r.witnesses) {
                ++checks;
                if (w.holds()) {
                    ++passed_here;
                    continue;
                }
                ++failures;
                out << "  fail s=" << s << " n=" << n << ": a_" << w.index << " = " << w.actual << ", expected "
                    << w.expected << " (mod " << r.modulus << ")\n";
            }
        }
        out << "  n=" << n << " (mod 3^" << n + 3 << "): " << passed_here << '/' << 3 * o.s_max << " hold\n";
    }
    out << "prop1: " << checks - failures << '/' << checks << " congruences hold\n";
    return failures == 0 ? kOk : kViolation;
}

int verify_identity(const Options& o, std::ostream& out) {
    const Index grid = o.max != 0 ? o.max : 200;
    constexpr Index kMaxSum = 5000;
    const auto& a = narayana();

    std::vector<BigInt> terms;
    for (const auto& e : term_stream(a, 0, std::max<Index>(kMaxSum, 2 * grid))) terms.push_back(e.value);

    std::uint64_t failures = 0;
    const auto check = [&](Index m, Index n) {
        if (narayana_addition(m, n) == terms[m + n]) return;
        ++failures;
        out << "  fail m=" << m << " n=" << n << '\n';
    };
    for (Index m = 3; m <= grid; ++m) {
        for (Index n = 0; n <= grid; ++n) check(m, n);
    }
    const std::uint64_t grid_checks = grid >= 3 ? (grid - 2) * (grid + 1) : 0;
    out << "  exhaustive 3 <= m <= " << grid << ", 0 <= n <= " << grid << ": " << grid_checks << " pairs\n";

    std::mt19937_64 rng(o.seed);
    for (std::uint64_t t = 0; t < o.trials; ++t) {
        const Index m = std::uniform_int_distribution<Index>(3, kMaxSum)(rng);
        const Index n = std::uniform_int_distribution<Index>(0, kMaxSum - m)(rng);
        check(m, n);
    }
    out << "  random (seed " << o.seed << "): " << o.trials << " pairs with m + n <= " << kMaxSum << '\n';
    out << "identity: " << failures << " failures\n";
    return failures == 0 ? kOk : kViolation;
}

int verify_legendre(const Options& o, std::ostream& out) {
    const Index hi = o.max != 0 ? o.max : 10'000;
    std::uint64_t failures = 0;
    for (std::uint64_t p : {2, 3, 5}) {
        BigInt fact = 1;
        for (std::uint64_t m = 1; m <= hi; ++m) {
            const std::uint64_t exact = nu_factorial(m, p);
            const LegendreBounds b = nu_factorial_bounds(m, p);
            const Rational v(static_cast<unsigned long>(exact));
            bool ok = b.lower <= v && v <= b.upper;
            if (m <= 500) {
                fact *= m;
                ok = ok && nu(fact, p) == Valuation::finite(exact);
            }
            if (!ok) {
                ++failures;
                out << "  fail p=" << p << " m=" << m << ": " << b.lower.get_str() << " <= " << exact
                    << " <= " << b.upper.get_str() << '\n';
            }
        }
        out << "  p=" << p << ": m in [1, " << hi << "]\n";
    }
    out << "legendre: " << failures << " failures\n";
    return failures == 0 ? kOk : kViolation;
}

int verify_growth(const Options& o, std::ostream& out) {
    const Index hi = o.max != 0 ? o.max : 2000;
    const RootInterval root = isolate_alpha(Rational(1, 1000000));
    const auto failures = check_growth_upto(hi, root);
    for (const auto& f : failures) {
        out << "  fail n=" << f.n << (f.lower_holds ? "" : " lower") << (f.upper_holds ? "" : " upper") << '\n';
    }
    out << "growth: lo^(n-3) <= a_n <= hi^(n-1) for n in [1, " << hi << "], alpha in [" << root.lo.get_str()
        << ", " << root.hi.get_str() << "]\n";
    out << "growth: " << failures.size() << " failures\n";
    return failures.empty() ? kOk : kViolation;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.target == "theorem1") return verify_narayana_table(o, out, err);
    if (o.target == "tables") return verify_tables(o, out, err);
    if (o.target == "prop1") return verify_prop1_cmd(o, out);
    if (o.target == "identity") return verify_identity(o, out);
    if (o.target == "legendre") return verify_legendre(o, out);
    if (o.target == "growth") return verify_growth(o, out);
    throw UsageError("unknown verify target: " + o.target);
}

// ---- solve / table --------------------------------------------------------

int cmd_solve(const Options& o, std::ostream& out) {
    const FactorialSearch search = search_factorial(derive_bounds(isolate_alpha(default_root_width())));
    if (o.format == "json") {
        out << nlohmann::json{{"bounds", to_json(search.bounds)}, {"solutions", to_json(search.solutions)}}.dump(2)
            << '\n';
        return kOk;
    }
    const BoundReport& b = search.bounds;
    out << "bounds: m_max=" << b.m_max << " n_max=" << b.n_max << " (last feasible m=" << b.last_feasible_m
        << ")\n";
    out << "alpha in [" << std::setprecision(12) << b.root.lo.get_d() << ", " << b.root.hi.get_d() << "]\n";
    out << "solutions:";
    for (const auto& s : search.solutions) out << " (" << s.n << ',' << s.m << ')';
    out << '\n';
    return kOk;
}

int cmd_table(const Options& o, std::ostream& out) {
    const RecurrenceSpec spec = sequence_named(o.sequence);
    const RuleTable* table = table_for(spec.name());
    if (table == nullptr || table->prime() != 3) throw UsageError("no 3-adic closed form for " + spec.name());
    if (o.from < 1 || o.from > o.to) throw UsageError("table needs 1 <= --from <= --to");

    bool all_match = true;
    nlohmann::json rows = nlohmann::json::array();
    if (o.format == "csv") out << "n,term,nu3_closed,nu3_direct,match\n";
    for (const auto& e : term_stream(spec, o.from, o.to)) {
        const std::uint64_t closed = closed_valuation(*table, e.n).value();
        const std::uint64_t direct = nu(e.value, 3).value();
        const bool match = closed == direct;
        all_match = all_match && match;
        const std::string digits = format_digits(e.value, o.digits_cap);
        if (o.format == "csv") {
            out << e.n << ',' << digits << ',' << closed << ',' << direct << ',' << (match ? "true" : "false")
                << '\n';
        } else {
            rows.push_back(
                {{"n", e.n}, {"term", digits}, {"nu3_closed", closed}, {"nu3_direct", direct}, {"match", match}});
        }
    }
    if (o.format == "json") out << rows.dump(2) << '\n';
    return all_match ? kOk : kViolation;
}

int dump_table(const std::string& name, std::ostream& out) {
    const RuleTable* table = table_for(name);
    if (table == nullptr) throw UsageError("no rule table for " + name);
    out << to_json(*table).dump(2) << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Terms and p-adic valuations of integer linear recurrences", "narval"};
    app.option_defaults()->always_capture_default();
    app.add_option("--dump-table", o.dump_table, "Print the rule table of a sequence as JSON");
    const auto sequences = builtin_sequence_names();

    auto* term_cmd = app.add_subcommand("term", "Print u_n exactly or modulo --mod");
    term_cmd->add_option("sequence", o.sequence)->required()->check(CLI::IsMember(sequences));
    term_cmd->add_option("n", o.n)->required();
    auto* mod_opt = term_cmd->add_option("--mod", o.modulus, "Modulus (>= 2)");
    term_cmd->add_option("--digits-cap", o.digits_cap, "Truncate long terms to this many leading digits");

    auto* val_cmd = app.add_subcommand("valuation", "Print nu_p(u_n)");
    val_cmd->add_option("sequence", o.sequence)->required()->check(CLI::IsMember(sequences));
    val_cmd->add_option("n", o.n)->required();
    val_cmd->add_option("--p", o.p, "Prime (defaults to the sequence's closed-form prime)");
    val_cmd->add_option("--method", o.method)->check(CLI::IsMember({"closed", "direct", "both"}));

    auto* verify_cmd = app.add_subcommand("verify", "Run a verification sweep");
    verify_cmd->add_option("target", o.target)
        ->required()
        ->check(CLI::IsMember({"theorem1", "prop1", "identity", "legendre", "growth", "tables"}));
    verify_cmd->add_option("--max", o.max, "Upper end of the index range")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--s-max", o.s_max)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--n-max", o.n_max)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--trials", o.trials, "Random identity pairs");
    verify_cmd->add_option("--seed", o.seed, "Seed for random identity pairs");
    verify_cmd->add_option("--workers", o.workers, "Worker threads for table sweeps")->check(CLI::PositiveNumber);

    auto* period_cmd = app.add_subcommand("period", "Print the period of u_n modulo m");
    period_cmd->add_option("sequence", o.sequence)->required()->check(CLI::IsMember(sequences));
    period_cmd->add_option("modulus", o.modulus)->required();

    auto* solve_cmd = app.add_subcommand("solve", "Solve a_n = m! over the Narayana numbers");
    solve_cmd->add_option("problem", o.problem)->required()->check(CLI::IsMember({"factorial"}));
    o.format = "text";
    solve_cmd->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));

    auto* table_cmd = app.add_subcommand("table", "Emit n, term and nu_3 rows");
    table_cmd->add_option("sequence", o.sequence)->required()->check(CLI::IsMember(sequences));
    table_cmd->add_option("--from", o.from);
    table_cmd->add_option("--to", o.to);
    table_cmd->add_option("--digits-cap", o.digits_cap);
    std::string table_format = "csv";
    table_cmd->add_option("--format", table_format)->check(CLI::IsMember({"csv", "json"}));

    app.require_subcommand(0, 1);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    o.has_modulus = mod_opt->count() > 0;

    try {
        if (!o.dump_table.empty()) return dump_table(o.dump_table, out);
        if (*term_cmd) return cmd_term(o, out);
        if (*val_cmd) return cmd_valuation(o, out);
        if (*verify_cmd) return cmd_verify(o, out, err);
        if (*period_cmd) return cmd_period(o, out, err);
        if (*solve_cmd) return cmd_solve(o, out);
        if (*table_cmd) {
            o.format = table_format;
            return cmd_table(o, out);
        }
        out << app.help();
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kViolation;
    }
}

}  // namespace narval::cli
