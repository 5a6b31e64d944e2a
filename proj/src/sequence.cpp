#include "narval/sequence.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace narval {

namespace {

// Square matrix over Z/modulus, row-major.
class ModMatrix {
public:
    ModMatrix(std::size_t size, std::uint64_t modulus)
        : size_(size), modulus_(modulus), data_(size * size, 0) {}

    static ModMatrix identity(std::size_t size, std::uint64_t modulus) {
        ModMatrix m(size, modulus);
        for (std::size_t i = 0; i < size; ++i) m(i, i) = 1 % modulus;
        return m;
    }

    std::uint64_t& operator()(std::size_t r, std::size_t c) { return data_[r * size_ + c]; }
    std::uint64_t operator()(std::size_t r, std::size_t c) const { return data_[r * size_ + c]; }

    ModMatrix operator*(const ModMatrix& rhs) const {
        ModMatrix out(size_, modulus_);
        for (std::size_t i = 0; i < size_; ++i) {
            for (std::size_t k = 0; k < size_; ++k) {
                const std::uint64_t a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < size_; ++j) {
                    out(i, j) = add_mod(out(i, j), mul_mod(a, rhs(k, j), modulus_), modulus_);
                }
            }
        }
        return out;
    }

    std::vector<std::uint64_t> apply(const std::vector<std::uint64_t>& v) const {
        std::vector<std::uint64_t> out(size_, 0);
        for (std::size_t i = 0; i < size_; ++i) {
            for (std::size_t j = 0; j < size_; ++j) {
                out[i] = add_mod(out[i], mul_mod((*this)(i, j), v[j], modulus_), modulus_);
            }
        }
        return out;
    }

private:
    std::size_t size_;
    std::uint64_t modulus_;
    std::vector<std::uint64_t> data_;
};

// Maps (u_n, ..., u_{n+k-1}) to (u_{n+1}, ..., u_{n+k}).
ModMatrix companion(const RecurrenceSpec& spec, std::uint64_t modulus) {
    const std::size_t k = spec.order();
    ModMatrix t(k, modulus);
    for (std::size_t i = 0; i + 1 < k; ++i) t(i, i + 1) = 1 % modulus;
    const auto& c = spec.coefficients();
    for (std::size_t j = 0; j < k; ++j) t(k - 1, j) = reduce(c[k - 1 - j], modulus);
    return t;
}

ResidueWindow initial_residues(const RecurrenceSpec& spec, std::uint64_t modulus) {
    ResidueWindow w;
    w.values.reserve(spec.order());
    for (auto v : spec.initials()) w.values.push_back(reduce(v, modulus));
    return w;
}

void require_modulus(std::uint64_t modulus) {
    if (modulus < 2) throw std::invalid_argument("modulus must be at least 2");
}

}  // namespace

RecurrenceSpec::RecurrenceSpec(std::string name, std::vector<std::int64_t> coefficients,
                               std::vector<std::int64_t> initials)
    : name_(std::move(name)), coefficients_(std::move(coefficients)), initials_(std::move(initials)) {
    if (coefficients_.size() < 2) throw std::invalid_argument("recurrence order must be at least 2");
    if (initials_.size() != coefficients_.size())
        throw std::invalid_argument("initial values must match the recurrence order");
    if (coefficients_.back() == 0) throw std::invalid_argument("trailing coefficient must be nonzero");
}

const RecurrenceSpec& narayana() {
    static const RecurrenceSpec spec{"narayana", {1, 0, 1}, {0, 1, 1}};
    return spec;
}

const RecurrenceSpec& fibonacci() {
    static const RecurrenceSpec spec{"fibonacci", {1, 1}, {0, 1}};
    return spec;
}

const RecurrenceSpec& tribonacci() {
    static const RecurrenceSpec spec{"tribonacci", {1, 1, 1}, {0, 1, 1}};
    return spec;
}

const RecurrenceSpec& tripell() {
    static const RecurrenceSpec spec{"tripell", {2, 1, 1}, {0, 1, 2}};
    return spec;
}

std::optional<RecurrenceSpec> builtin_sequence(std::string_view name) {
    for (const RecurrenceSpec* spec : {&narayana(), &fibonacci(), &tribonacci(), &tripell()}) {
        if (spec->name() == name) return *spec;
    }
    return std::nullopt;
}

std::vector<std::string> builtin_sequence_names() {
    return {narayana().name(), fibonacci().name(), tribonacci().name(), tripell().name()};
}

std::uint64_t reduce(std::int64_t value, std::uint64_t modulus) {
    if (value >= 0) return static_cast<std::uint64_t>(value) % modulus;
    // -(value + 1) avoids overflow at INT64_MIN.
    const std::uint64_t neg = static_cast<std::uint64_t>(-(value + 1)) + 1;
    const std::uint64_t r = neg % modulus;
    return r == 0 ? 0 : modulus - r;
}

std::uint64_t reduce(const BigInt& value, std::uint64_t modulus) {
    return mpz_fdiv_ui(value.get_mpz_t(), modulus);
}

ExactWindow initial_window(const RecurrenceSpec& spec) {
    ExactWindow w;
    w.values.reserve(spec.order());
    for (auto v : spec.initials()) w.values.emplace_back(static_cast<long>(v));
    return w;
}

void advance(const RecurrenceSpec& spec, ExactWindow& window) {
    const auto& c = spec.coefficients();
    const std::size_t k = c.size();
    BigInt next = 0;
    for (std::size_t i = 0; i < k; ++i) {
        // values[k-1-i] is u_{n-1-i} relative to the term being produced.
        if (c[i] != 0) next += window.values[k - 1 - i] * static_cast<long>(c[i]);
    }
    std::rotate(window.values.begin(), window.values.begin() + 1, window.values.end());
    window.values.back() = std::move(next);
    ++window.start_index;
}

void advance(const RecurrenceSpec& spec, ResidueWindow& window, std::uint64_t modulus) {
    const auto& c = spec.coefficients();
    const std::size_t k = c.size();
    std::uint64_t next = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (c[i] == 0) continue;
        next = add_mod(next, mul_mod(reduce(c[i], modulus), window.values[k - 1 - i], modulus), modulus);
    }
    std::rotate(window.values.begin(), window.values.begin() + 1, window.values.end());
    window.values.back() = next;
    ++window.start_index;
}

ExactWindow window_at(const RecurrenceSpec& spec, Index n) {
    ExactWindow w = initial_window(spec);
    while (w.start_index < n) advance(spec, w);
    return w;
}

BigInt term(const RecurrenceSpec& spec, Index n) {
    const std::size_t k = spec.order();
    if (n < k) return BigInt(static_cast<long>(spec.initials()[n]));
    return window_at(spec, n - (k - 1)).values.back();
}

ResidueWindow window_mod(const RecurrenceSpec& spec, Index n, std::uint64_t modulus) {
    require_modulus(modulus);
    ModMatrix power = ModMatrix::identity(spec.order(), modulus);
    ModMatrix base = companion(spec, modulus);
    for (Index e = n; e != 0; e >>= 1) {
        if (e & 1) power = power * base;
        if (e > 1) base = base * base;
    }
    ResidueWindow w;
    w.start_index = n;
    w.values = power.apply(initial_residues(spec, modulus).values);
    return w;
}

std::uint64_t term_mod(const RecurrenceSpec& spec, Index n, std::uint64_t modulus) {
    require_modulus(modulus);
    if (n < spec.order()) return reduce(spec.initials()[n], modulus);
    return window_mod(spec, n, modulus).values.front();
}

TermStream::TermStream(const RecurrenceSpec& spec, Index lo, Index hi) : spec_(&spec), lo_(lo), hi_(hi) {
    if (lo > hi) throw std::invalid_argument("term_stream requires lo <= hi");
}

TermStream::iterator TermStream::begin() const {
    iterator it(spec_, window_at(*spec_, lo_), hi_);
    it.done_ = false;
    return it;
}

TermStream::iterator& TermStream::iterator::operator++() {
    if (window_.start_index >= hi_) {
        done_ = true;
    } else {
        advance(*spec_, window_);
    }
    return *this;
}

BigInt narayana_addition(Index m, Index n) {
    if (m < 3) throw std::invalid_argument("narayana_addition requires m >= 3");
    const auto& a = narayana();
    const ExactWindow left = window_at(a, m - 3);   // a_{m-3}, a_{m-2}, a_{m-1}
    const ExactWindow right = window_at(a, n);      // a_n, a_{n+1}, a_{n+2}
    return left.values[2] * right.values[2] + left.values[0] * right.values[1] +
           left.values[1] * right.values[0];
}

Index period_mod(const RecurrenceSpec& spec, std::uint64_t modulus) {
    require_modulus(modulus);
    if (std::gcd(reduce(spec.coefficients().back(), modulus), modulus) != 1) {
        throw NotPurelyPeriodic(spec.name() + " is not purely periodic mod " + std::to_string(modulus));
    }
    // modulus^order, saturating.
    Index cutoff = 1;
    for (std::size_t i = 0; i < spec.order(); ++i) {
        if (cutoff > std::numeric_limits<Index>::max() / modulus) {
            cutoff = std::numeric_limits<Index>::max();
            break;
        }
        cutoff *= modulus;
    }
    const ResidueWindow start = initial_residues(spec, modulus);
    ResidueWindow w = start;
    for (Index t = 1; t <= cutoff; ++t) {
        advance(spec, w, modulus);
        if (w.values == start.values) return t;
    }
    throw CutoffExceeded("no return to the initial state within modulus^order steps");
}

}  // namespace narval
