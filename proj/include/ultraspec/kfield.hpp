#pragma once

/**
 * @file kfield.hpp
 * @brief Exact arithmetic in the Laurent series field Q((t)).
 *
 * A Scalar is a finite Laurent polynomial with rational coefficients, plus an
 * optional absolute precision P meaning "+ O(t^P)". The t-adic valuation
 * plays the role of the non-archimedean absolute value |x| = r^{-v(x)}; the
 * base r > 1 is never fixed, so norms are only ever compared through
 * valuations (see NormValue).
 *
 * The residue field Q is formally real, so a sum of squares of nonzero
 * scalars never loses its leading term. The inner product on c0 relies on
 * that.
 */

#include <algorithm>
#include <cctype>
#include <climits>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ultraspec/error.hpp"

namespace ultraspec {

using Rational = mpq_class;

inline constexpr int kDefaultPrecision = 12;

/**
 * Norm of a scalar, vector or operator, stored as its valuation.
 *
 * Valuations live in (1/2)Z because the norm of an operator is the square
 * root of |<T,T>|. The infinite valuation is the zero norm. Ordering is by
 * valuation, so `a < b` means a has the LARGER norm.
 */
class NormValue {
public:
    NormValue() = default; // zero norm

    static NormValue zero_norm() { return NormValue{}; }
    static NormValue of_valuation(long v) { return NormValue(2 * v); }
    static NormValue of_twice_valuation(long twice) { return NormValue(twice); }

    bool is_zero_norm() const noexcept { return !twice_.has_value(); }
    bool is_integral() const noexcept { return !twice_ || *twice_ % 2 == 0; }

    long twice_valuation() const {
        if (!twice_) throw std::logic_error("zero norm has infinite valuation");
        return *twice_;
    }

    long valuation() const {
        if (!is_integral()) throw std::logic_error("valuation is not an integer");
        return twice_valuation() / 2;
    }

    // Norm of the square root.
    NormValue sqrt() const {
        if (!twice_) return {};
        if (*twice_ % 2 != 0) throw std::logic_error("square root of a half-integral norm");
        return NormValue(*twice_ / 2);
    }

    friend NormValue operator*(const NormValue& a, const NormValue& b) {
        if (!a.twice_ || !b.twice_) return {};
        return NormValue(*a.twice_ + *b.twice_);
    }

    friend bool operator==(const NormValue&, const NormValue&) = default;

    friend std::strong_ordering operator<=>(const NormValue& a, const NormValue& b) {
        if (!a.twice_ && !b.twice_) return std::strong_ordering::equal;
        if (!a.twice_) return std::strong_ordering::greater;
        if (!b.twice_) return std::strong_ordering::less;
        return *a.twice_ <=> *b.twice_;
    }

    std::string to_string() const {
        if (!twice_) return "inf";
        if (*twice_ % 2 == 0) return std::to_string(*twice_ / 2);
        return std::to_string(*twice_) + "/2";
    }

    friend std::ostream& operator<<(std::ostream& os, const NormValue& n) {
        return os << "v=" << n.to_string();
    }

private:
    explicit NormValue(long twice) : twice_(twice) {}

    std::optional<long> twice_;
};

// The larger of two norms, i.e. the smaller valuation.
inline NormValue norm_max(const NormValue& a, const NormValue& b) { return std::min(a, b); }

/**
 * Element of Q((t)), possibly known only up to O(t^P).
 *
 * Invariants: every stored coefficient is nonzero and its exponent is below
 * the precision. An exact zero has no coefficients and no precision; an
 * imprecise zero "O(t^P)" has no coefficients and precision P.
 */
class Scalar {
public:
    using Terms = std::map<int, Rational>;

    Scalar() = default;
    Scalar(long c) { set_coeff(0, Rational(c)); }
    Scalar(const Rational& c) { set_coeff(0, c); }

    static Scalar monomial(const Rational& c, int exponent) {
        Scalar s;
        s.set_coeff(exponent, c);
        return s;
    }

    static Scalar t(int exponent = 1) { return monomial(Rational(1), exponent); }

    static Scalar big_o(int precision) {
        Scalar s;
        s.precision_ = precision;
        return s;
    }

    static Scalar from_terms(Terms terms, std::optional<int> precision = std::nullopt) {
        Scalar s;
        s.precision_ = precision;
        for (auto& [e, c] : terms) s.set_coeff(e, c);
        return s;
    }

    const Terms& terms() const noexcept { return terms_; }
    std::optional<int> precision() const noexcept { return precision_; }

    bool is_exact() const noexcept { return !precision_.has_value(); }
    bool is_exact_zero() const noexcept { return terms_.empty() && !precision_; }
    bool is_imprecise_zero() const noexcept { return terms_.empty() && precision_.has_value(); }
    bool has_leading_term() const noexcept { return !terms_.empty(); }

    // Exact, single nonzero term.
    bool is_monomial() const noexcept { return is_exact() && terms_.size() == 1; }

    // A rational constant with no uncertainty (including exact zero).
    bool is_rational_constant() const noexcept {
        return is_exact() && (terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0));
    }

    Rational constant_term() const {
        auto it = terms_.find(0);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational coeff(int exponent) const {
        auto it = terms_.find(exponent);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int leading_exponent() const {
        if (terms_.empty()) {
            if (precision_) throw error(errc::imprecise_zero, "valuation of O(t^" + std::to_string(*precision_) + ")");
            throw std::logic_error("leading exponent of exact zero");
        }
        return terms_.begin()->first;
    }

    const Rational& leading_coefficient() const {
        if (terms_.empty()) throw error(errc::imprecise_zero, "no known leading coefficient");
        return terms_.begin()->second;
    }

    // Lower bound on the valuation: exact when a leading term is known.
    long valuation_bound() const noexcept {
        if (!terms_.empty()) return terms_.begin()->first;
        if (precision_) return *precision_;
        return LONG_MAX;
    }

    /// t-adic valuation. Throws ImpreciseZero when only a lower bound is known.
    NormValue valuation() const {
        if (is_exact_zero()) return NormValue::zero_norm();
        return NormValue::of_valuation(leading_exponent());
    }

    // Forget everything at exponents >= p.
    Scalar truncated(int p) const {
        Scalar s = *this;
        if (!s.precision_ || *s.precision_ > p) s.precision_ = p;
        s.terms_.erase(s.terms_.lower_bound(p), s.terms_.end());
        return s;
    }

    Scalar operator-() const {
        Scalar s = *this;
        for (auto& [e, c] : s.terms_) c = -c;
        return s;
    }

    Scalar& operator+=(const Scalar& o) {
        precision_ = min_precision(precision_, o.precision_);
        for (const auto& [e, c] : o.terms_) add_coeff(e, c);
        if (precision_) terms_.erase(terms_.lower_bound(*precision_), terms_.end());
        return *this;
    }

    Scalar& operator-=(const Scalar& o) { return *this += -o; }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_exact_zero() || b.is_exact_zero()) return Scalar{};
        std::optional<int> prec;
        if (a.precision_) prec = clamp_int(static_cast<long>(*a.precision_) + b.valuation_bound());
        if (b.precision_) prec = min_precision(prec, clamp_int(static_cast<long>(*b.precision_) + a.valuation_bound()));
        Scalar r;
        r.precision_ = prec;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                int e = ea + eb;
                if (prec && e >= *prec) break;
                r.add_coeff(e, ca * cb);
            }
        return r;
    }

    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    // Structural equality: same known terms and same precision.
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.precision_ == b.precision_ && a.terms_ == b.terms_;
    }

    std::string to_string() const;

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

private:
    static std::optional<int> min_precision(std::optional<int> a, std::optional<int> b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    static int clamp_int(long v) {
        return static_cast<int>(std::clamp<long>(v, INT_MIN / 2, INT_MAX / 2));
    }

    void set_coeff(int e, const Rational& c) {
        if (c == 0 || (precision_ && e >= *precision_)) return;
        terms_[e] = c;
    }

    void add_coeff(int e, const Rational& c) {
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        } else if (c == 0) {
            terms_.erase(it);
        }
    }

    Terms terms_;
    std::optional<int> precision_;
};

inline Scalar operator*(const Rational& c, const Scalar& s) { return Scalar(c) * s; }

enum class ArithOp { add, sub, mul };

inline Scalar scalar_arith(ArithOp op, const Scalar& a, const Scalar& b) {
    switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    }
    return {};
}

/**
 * Multiplicative inverse with absolute precision `precision`: the result b
 * satisfies b = 1/a + O(t^precision), so a*b = 1 + O(t^(precision + v(a))).
 * Exact monomials invert exactly.
 */
inline Scalar inverse(const Scalar& a, int precision) {
    if (!a.has_leading_term())
        throw error(errc::zero_division, a.is_exact_zero() ? "inverse of exact zero" : "inverse of " + a.to_string());
    const int v = a.leading_exponent();
    const Rational lead = a.leading_coefficient();
    if (a.is_monomial()) return Scalar::monomial(1 / lead, -v);

    // a = lead * t^v * u with u = 1 + (higher terms); invert u as a power series.
    long rel = static_cast<long>(precision) + v;
    if (a.precision()) rel = std::min<long>(rel, static_cast<long>(*a.precision()) - v);
    if (rel <= 0) return Scalar::big_o(static_cast<int>(rel - v));

    std::vector<Rational> u(static_cast<std::size_t>(rel), Rational(0));
    for (const auto& [e, c] : a.terms()) {
        long k = e - v;
        if (k < rel) u[static_cast<std::size_t>(k)] = c / lead;
    }
    std::vector<Rational> inv(static_cast<std::size_t>(rel), Rational(0));
    inv[0] = 1;
    for (long k = 1; k < rel; ++k) {
        Rational acc = 0;
        for (long j = 1; j <= k; ++j)
            if (u[static_cast<std::size_t>(j)] != 0) acc += u[static_cast<std::size_t>(j)] * inv[static_cast<std::size_t>(k - j)];
        inv[static_cast<std::size_t>(k)] = -acc;
    }
    Scalar::Terms terms;
    for (long k = 0; k < rel; ++k)
        if (inv[static_cast<std::size_t>(k)] != 0) terms.emplace(static_cast<int>(k - v), inv[static_cast<std::size_t>(k)] / lead);
    return Scalar::from_terms(std::move(terms), static_cast<int>(rel - v));
}

/**
 * a / b. Exact whenever b is an exact monomial; otherwise b is inverted to
 * enough precision that the quotient is known at least up to O(t^precision)
 * (or as far as a's own precision allows).
 */
inline Scalar quotient(const Scalar& a, const Scalar& b, int precision = kDefaultPrecision) {
    if (b.is_monomial()) return a * inverse(b, 0);
    if (!b.has_leading_term()) return a * inverse(b, precision); // throws
    if (a.is_exact_zero()) return Scalar{};
    long shift = a.has_leading_term() ? a.leading_exponent() : a.valuation_bound();
    return a * inverse(b, static_cast<int>(static_cast<long>(precision) - shift));
}

inline Scalar pow(const Scalar& a, unsigned n) {
    Scalar r(1);
    for (unsigned i = 0; i < n; ++i) r *= a;
    return r;
}

/// a == b + O(t^p): every coefficient of a - b below p is known and zero.
inline bool congruent_mod(const Scalar& a, const Scalar& b, int p) {
    Scalar d = a - b;
    if (d.precision() && *d.precision() < p) return false;
    return d.terms().empty() || d.terms().begin()->first >= p;
}

/**
 * Largest norm among `values`. Imprecise zeros only matter when their bound
 * could exceed the largest known norm; if that is undecidable, ImpreciseZero
 * is thrown.
 */
inline NormValue norm_max(std::span<const Scalar> values) {
    std::optional<long> known;
    std::optional<long> unknown_bound;
    for (const auto& s : values) {
        if (s.has_leading_term()) {
            long v = s.leading_exponent();
            known = known ? std::min(*known, v) : v;
        } else if (s.is_imprecise_zero()) {
            long b = *s.precision();
            unknown_bound = unknown_bound ? std::min(*unknown_bound, b) : b;
        }
    }
    if (unknown_bound && (!known || *unknown_bound <= *known))
        throw error(errc::imprecise_zero, "norm undecidable at precision " + std::to_string(*unknown_bound));
    return known ? NormValue::of_valuation(*known) : NormValue::zero_norm();
}

namespace detail {

inline std::string rational_str(const Rational& q) { return q.get_str(); }

inline std::string t_power(int e) {
    if (e == 1) return "t";
    return "t^" + std::to_string(e);
}

} // namespace detail

// Canonical text form, e.g. "1/2*t^-1 + 3 - 2*t^2 + O(t^5)".
inline std::string Scalar::to_string() const {
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational mag = abs(c);
        bool neg = c < 0;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (e == 0) {
            out += detail::rational_str(mag);
        } else if (mag == 1) {
            out += detail::t_power(e);
        } else {
            out += detail::rational_str(mag) + "*" + detail::t_power(e);
        }
        first = false;
    }
    if (precision_) {
        if (!first) out += " + ";
        out += "O(t^" + std::to_string(*precision_) + ")";
        first = false;
    }
    if (first) out = "0";
    return out;
}

namespace detail {

class ScalarParser {
public:
    explicit ScalarParser(std::string_view text) : s_(text) {}

    Scalar parse() {
        Scalar::Terms terms;
        std::optional<int> precision;
        skip_ws();
        if (at_end()) fail("empty scalar");
        bool first = true;
        while (!at_end()) {
            int sign = 1;
            if (!first) {
                if (peek() == '+') {
                    ++pos_;
                } else if (peek() == '-') {
                    sign = -1;
                    ++pos_;
                } else {
                    fail("expected '+' or '-'");
                }
                skip_ws();
            }
            while (peek() == '-' || peek() == '+') {
                if (peek() == '-') sign = -sign;
                ++pos_;
                skip_ws();
            }
            if (precision) fail("O(t^P) must be the last term");
            if (peek() == 'O') {
                if (sign < 0) fail("negated O-term");
                ++pos_;
                expect('(');
                skip_ws();
                precision = parse_t_power();
                skip_ws();
                expect(')');
            } else {
                auto [e, c] = parse_term();
                terms[e] += sign * c;
            }
            first = false;
            skip_ws();
        }
        return Scalar::from_terms(std::move(terms), precision);
    }

    std::size_t position() const noexcept { return pos_; }

private:
    bool at_end() const noexcept { return pos_ >= s_.size(); }
    char peek() const noexcept { return at_end() ? '\0' : s_[pos_]; }

    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw error(errc::parse_error, msg + " at column " + std::to_string(pos_ + 1) + " in \"" + std::string(s_) + "\"");
    }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string digits() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected digits");
        return std::string(s_.substr(start, pos_ - start));
    }

    long integer() {
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        std::string d = digits();
        if (d.size() > 9) fail("exponent out of range");
        long v = std::stol(d);
        return neg ? -v : v;
    }

    // "t", "t^k", "t^-k"
    int parse_t_power() {
        expect('t');
        if (peek() != '^') return 1;
        ++pos_;
        return static_cast<int>(integer());
    }

    std::pair<int, Rational> parse_term() {
        Rational c = 1;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            std::string num = digits();
            std::string den = "1";
            if (peek() == '/') {
                ++pos_;
                den = digits();
            }
            mpz_class d(den);
            if (d == 0) fail("zero denominator");
            c = Rational(mpz_class(num), d);
            c.canonicalize();
            skip_ws();
            if (peek() != '*') return {0, c};
            ++pos_;
            skip_ws();
        }
        if (peek() != 't') fail("expected 't'");
        return {parse_t_power(), c};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the textual scalar syntax; throws error(errc::parse_error).
inline Scalar parse_scalar(std::string_view text) { return detail::ScalarParser(text).parse(); }

} // namespace ultraspec
