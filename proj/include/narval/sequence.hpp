#pragma once

// Integer linear recurrences: exact terms, modular terms via companion-matrix
// powering, streaming windows, periods modulo m, and the Narayana addition
// identity.

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace narval {

using BigInt = mpz_class;
using Index = std::uint64_t;

class NotPurelyPeriodic : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class CutoffExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// u_n = c_1 u_{n-1} + ... + c_k u_{n-k} with initial values u_0..u_{k-1}.
class RecurrenceSpec {
public:
    /// Throws std::invalid_argument unless order >= 2, both lists have
    /// `order` entries and the trailing coefficient is nonzero.
    RecurrenceSpec(std::string name, std::vector<std::int64_t> coefficients,
                   std::vector<std::int64_t> initials);

    const std::string& name() const noexcept { return name_; }
    std::size_t order() const noexcept { return coefficients_.size(); }
    const std::vector<std::int64_t>& coefficients() const noexcept { return coefficients_; }
    const std::vector<std::int64_t>& initials() const noexcept { return initials_; }

    bool operator==(const RecurrenceSpec&) const = default;

private:
    std::string name_;
    std::vector<std::int64_t> coefficients_;
    std::vector<std::int64_t> initials_;
};

const RecurrenceSpec& narayana();
const RecurrenceSpec& fibonacci();
const RecurrenceSpec& tribonacci();
const RecurrenceSpec& tripell();

/// Looks up a built-in sequence by its lowercase name.
std::optional<RecurrenceSpec> builtin_sequence(std::string_view name);
std::vector<std::string> builtin_sequence_names();

/// `order` consecutive terms u_start..u_{start+order-1}.
template <typename Value>
struct SequenceWindow {
    Index start_index = 0;
    std::vector<Value> values;

    bool operator==(const SequenceWindow&) const = default;
};

using ExactWindow = SequenceWindow<BigInt>;
using ResidueWindow = SequenceWindow<std::uint64_t>;

ExactWindow initial_window(const RecurrenceSpec& spec);

/// Shifts the window one index forward using the recurrence.
void advance(const RecurrenceSpec& spec, ExactWindow& window);
void advance(const RecurrenceSpec& spec, ResidueWindow& window, std::uint64_t modulus);

/// Exact u_n by forward iteration.
BigInt term(const RecurrenceSpec& spec, Index n);

/// Exact window starting at n by forward iteration.
ExactWindow window_at(const RecurrenceSpec& spec, Index n);

/// u_n mod `modulus` in O(k^3 log n) via companion-matrix powering.
/// Throws std::invalid_argument when modulus < 2.
std::uint64_t term_mod(const RecurrenceSpec& spec, Index n, std::uint64_t modulus);

/// Residues of u_n..u_{n+k-1} mod `modulus`, also by matrix powering.
ResidueWindow window_mod(const RecurrenceSpec& spec, Index n, std::uint64_t modulus);

/// Forward range over (n, u_n) for lo <= n <= hi holding only one window of
/// terms at a time.
class TermStream {
public:
    struct Entry {
        Index n;
        const BigInt& value;
    };

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Entry;
        using difference_type = std::ptrdiff_t;

        iterator() = default;

        Entry operator*() const { return {window_.start_index, window_.values.front()}; }
        iterator& operator++();
        void operator++(int) { ++*this; }
        bool operator==(std::default_sentinel_t) const noexcept { return done_; }

    private:
        friend class TermStream;
        iterator(const RecurrenceSpec* spec, ExactWindow window, Index hi)
            : spec_(spec), window_(std::move(window)), hi_(hi) {}

        const RecurrenceSpec* spec_ = nullptr;
        ExactWindow window_;
        Index hi_ = 0;
        bool done_ = true;
    };

    /// Throws std::invalid_argument when lo > hi.
    TermStream(const RecurrenceSpec& spec, Index lo, Index hi);

    iterator begin() const;
    std::default_sentinel_t end() const noexcept { return {}; }

private:
    const RecurrenceSpec* spec_;
    Index lo_;
    Index hi_;
};

inline TermStream term_stream(const RecurrenceSpec& spec, Index lo, Index hi) {
    return TermStream(spec, lo, hi);
}

/// a_{m-1} a_{n+2} + a_{m-3} a_{n+1} + a_{m-2} a_n over the Narayana numbers,
/// which equals a_{m+n}. Throws std::invalid_argument when m < 3.
BigInt narayana_addition(Index m, Index n);

/// Least t > 0 with state(t) == state(0) mod `modulus`.
/// Throws NotPurelyPeriodic when gcd(c_k, modulus) != 1 and CutoffExceeded
/// if no return happens within modulus^order steps.
Index period_mod(const RecurrenceSpec& spec, std::uint64_t modulus);

/// Reduces a signed value into [0, modulus).
std::uint64_t reduce(std::int64_t value, std::uint64_t modulus);
std::uint64_t reduce(const BigInt& value, std::uint64_t modulus);

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t modulus) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % modulus);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t modulus) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) + b) % modulus);
}

}  // namespace narval
