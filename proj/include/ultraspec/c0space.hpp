#pragma once

/**
 * @file c0space.hpp
 * @brief The sequence space c0 over Q((t)): finitely supported vectors, the
 * bilinear form <x,y> = sum x_i y_i, the sup norm, orthonormal families and
 * normal projections.
 *
 * Indices are 1-based, e_1, e_2, ...
 */

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultraspec/kfield.hpp"

namespace ultraspec {

/// Finitely supported element of c0. Exact zeros are never stored.
class Vector {
public:
    using Entries = std::map<std::size_t, Scalar>;

    Vector() = default;

    // Dense literal: the first entry is the coordinate of e_1.
    Vector(std::initializer_list<Scalar> dense) {
        std::size_t i = 1;
        for (const auto& s : dense) set(i++, s);
    }

    static Vector from_dense(const std::vector<Scalar>& dense) {
        Vector v;
        for (std::size_t i = 0; i < dense.size(); ++i) v.set(i + 1, dense[i]);
        return v;
    }

    static Vector unit(std::size_t n, Scalar c = Scalar(1)) {
        Vector v;
        v.set(n, std::move(c));
        return v;
    }

    const Entries& entries() const noexcept { return entries_; }
    bool is_zero() const noexcept { return entries_.empty(); }

    const Scalar& operator[](std::size_t i) const {
        static const Scalar zero;
        auto it = entries_.find(i);
        return it == entries_.end() ? zero : it->second;
    }

    void set(std::size_t i, Scalar s) {
        if (i == 0) throw std::out_of_range("c0 indices start at 1");
        if (s.is_exact_zero())
            entries_.erase(i);
        else
            entries_[i] = std::move(s);
    }

    // Largest index carrying a stored entry (0 for the zero vector).
    std::size_t max_index() const noexcept { return entries_.empty() ? 0 : entries_.rbegin()->first; }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        s.reserve(entries_.size());
        for (const auto& [i, _] : entries_) s.push_back(i);
        return s;
    }

    std::vector<Scalar> dense(std::size_t n) const {
        std::vector<Scalar> d(n);
        for (const auto& [i, s] : entries_)
            if (i <= n) d[i - 1] = s;
        return d;
    }

    Vector& operator+=(const Vector& o) {
        for (const auto& [i, s] : o.entries_) set(i, (*this)[i] + s);
        return *this;
    }

    Vector& operator-=(const Vector& o) {
        for (const auto& [i, s] : o.entries_) set(i, (*this)[i] - s);
        return *this;
    }

    Vector& operator*=(const Scalar& c) {
        Entries out;
        for (auto& [i, s] : entries_) {
            Scalar p = c * s;
            if (!p.is_exact_zero()) out.emplace(i, std::move(p));
        }
        entries_ = std::move(out);
        return *this;
    }

    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
    friend Vector operator*(const Scalar& c, Vector v) { return v *= c; }
    friend Vector operator-(Vector v) { return v *= Scalar(-1); }

    friend bool operator==(const Vector&, const Vector&) = default;

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 1; i <= max_index(); ++i) {
            if (i > 1) out += ", ";
            out += (*this)[i].to_string();
        }
        return out + "]";
    }

    friend std::ostream& operator<<(std::ostream& os, const Vector& v) { return os << v.to_string(); }

private:
    Entries entries_;
};

/// Coordinatewise product (the algebra structure of c0).
inline Vector hadamard(const Vector& a, const Vector& b) {
    Vector r;
    for (const auto& [i, s] : a.entries()) {
        const Scalar& o = b[i];
        if (!o.is_exact_zero()) r.set(i, s * o);
    }
    return r;
}

inline Scalar inner_product(const Vector& x, const Vector& y) {
    Scalar acc;
    const auto& small = x.entries().size() <= y.entries().size() ? x : y;
    const auto& large = &small == &x ? y : x;
    for (const auto& [i, s] : small.entries()) {
        const Scalar& o = large[i];
        if (!o.is_exact_zero()) acc += s * o;
    }
    return acc;
}

/// Sup norm as a valuation: the minimum entry valuation, infinite for theta.
inline NormValue sup_norm(const Vector& x) {
    std::vector<Scalar> vals;
    vals.reserve(x.entries().size());
    for (const auto& [_, s] : x.entries()) vals.push_back(s);
    return norm_max(vals);
}

/**
 * Normal projection onto the line through y: P(x) = <x,y>/<y,y> y.
 * The division is exact when <y,y> is a monomial, otherwise carried out to
 * `precision`.
 */
inline Vector project(const Vector& y, const Vector& x, int precision = kDefaultPrecision) {
    if (y.is_zero()) throw error(errc::zero_direction, "projection onto theta");
    Scalar yy = inner_product(y, y);
    return quotient(inner_product(x, y), yy, precision) * y;
}

/**
 * Pairwise orthogonal vectors, each of sup norm 1.
 *
 * The canonical basis {e_i} is the infinite family used by default; explicit
 * families are finite lists y(1)..y(k).
 */
class OrthonormalFamily {
public:
    static std::shared_ptr<const OrthonormalFamily> canonical() {
        static const auto fam = std::shared_ptr<const OrthonormalFamily>(new OrthonormalFamily());
        return fam;
    }

    /// Validates orthogonality and unit norm; throws InvalidFamily otherwise.
    static std::shared_ptr<const OrthonormalFamily> from_members(std::vector<Vector> members) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (members[i].is_zero())
                throw error(errc::invalid_family, "member " + std::to_string(i + 1) + " is theta");
            if (sup_norm(members[i]) != NormValue::of_valuation(0))
                throw error(errc::invalid_family, "member " + std::to_string(i + 1) + " does not have norm 1");
            for (std::size_t j = 0; j < i; ++j)
                if (!inner_product(members[i], members[j]).is_exact_zero())
                    throw error(errc::invalid_family,
                                "members " + std::to_string(j + 1) + " and " + std::to_string(i + 1) + " are not orthogonal");
        }
        auto fam = std::shared_ptr<OrthonormalFamily>(new OrthonormalFamily());
        fam->canonical_ = false;
        for (auto& m : members) fam->gram_.push_back(inner_product(m, m));
        fam->members_ = std::move(members);
        return fam;
    }

    bool is_canonical() const noexcept { return canonical_; }

    // Number of members; nullopt for the (infinite) canonical basis.
    std::optional<std::size_t> size() const noexcept {
        if (canonical_) return std::nullopt;
        return members_.size();
    }

    bool covers(std::size_t k) const noexcept { return k >= 1 && (canonical_ || k <= members_.size()); }

    Vector member(std::size_t k) const {
        if (!covers(k)) throw error(errc::family_too_small, "family has no member " + std::to_string(k));
        return canonical_ ? Vector::unit(k) : members_[k - 1];
    }

    // <y(k), y(k)>
    Scalar self_inner(std::size_t k) const {
        if (!covers(k)) throw error(errc::family_too_small, "family has no member " + std::to_string(k));
        return canonical_ ? Scalar(1) : gram_[k - 1];
    }

    const std::vector<Vector>& members() const noexcept { return members_; }

    // Largest coordinate used by member k.
    std::size_t member_extent(std::size_t k) const { return canonical_ ? k : member(k).max_index(); }

    friend bool operator==(const OrthonormalFamily& a, const OrthonormalFamily& b) {
        return a.canonical_ == b.canonical_ && a.members_ == b.members_;
    }

private:
    OrthonormalFamily() = default;

    bool canonical_ = true;
    std::vector<Vector> members_;
    std::vector<Scalar> gram_;
};

using FamilyPtr = std::shared_ptr<const OrthonormalFamily>;

inline bool same_family(const FamilyPtr& a, const FamilyPtr& b) { return a == b || (a && b && *a == *b); }

/**
 * Orthogonalizes `vs` against the bilinear form and rescales each result by
 * t^{-v} so that <y,y> has valuation 0 (sup norm 1).
 *
 * A step divides by <y_j,y_j> only when that is a monomial, so the classical
 * formula is reproduced exactly for rational data; otherwise the step is
 * scaled through by <y_j,y_j> instead, which keeps everything exact.
 */
inline std::shared_ptr<const OrthonormalFamily> gram_schmidt(const std::vector<Vector>& vs) {
    std::vector<Vector> out;
    std::vector<Scalar> gram;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        Vector w = vs[k];
        for (std::size_t j = 0; j < out.size(); ++j) {
            Scalar c = inner_product(w, out[j]);
            if (c.is_exact_zero()) continue;
            if (gram[j].is_monomial()) {
                w -= quotient(c, gram[j]) * out[j];
            } else {
                w = gram[j] * w - c * out[j];
            }
        }
        if (w.is_zero()) throw error(errc::dependent_input, "vector " + std::to_string(k + 1) + " lies in the span of its predecessors");
        long v = sup_norm(w).valuation();
        if (v != 0) w *= Scalar::t(static_cast<int>(-v));
        gram.push_back(inner_product(w, w));
        out.push_back(std::move(w));
    }
    return OrthonormalFamily::from_members(std::move(out));
}

} // namespace ultraspec
