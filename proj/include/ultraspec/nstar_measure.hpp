#pragma once

/**
 * @file nstar_measure.hpp
 * @brief The Boolean ring of clopen subsets of N*, the projection-valued
 * measure m(C) = inverse_gelfand(eta_C), Riemann sums over tagged clopen
 * partitions, scalar measures m_{x,y} and the matrix representation
 * Lambda_{ij}(f) = <H e_i, e_j>.
 *
 * A clopen subset of N* is either a finite subset of N (type 1) or the
 * complement in N* of one (type 2, always containing infinity).
 */

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ultraspec/c0space.hpp"
#include "ultraspec/gelfand.hpp"
#include "ultraspec/kfield.hpp"
#include "ultraspec/operators.hpp"

namespace ultraspec {

class Clopen {
public:
    enum class Kind { finite, cofinite };

    Clopen() = default; // the empty set

    static Clopen finite(std::set<std::size_t> base) { return {Kind::finite, std::move(base)}; }
    static Clopen cofinite(std::set<std::size_t> base) { return {Kind::cofinite, std::move(base)}; }
    static Clopen empty() { return {}; }
    static Clopen whole() { return cofinite({}); }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::finite; }
    bool is_cofinite() const noexcept { return kind_ == Kind::cofinite; }
    const std::set<std::size_t>& base() const noexcept { return base_; }

    bool is_empty() const noexcept { return is_finite() && base_.empty(); }
    bool is_whole() const noexcept { return is_cofinite() && base_.empty(); }

    bool contains(const NStarPoint& p) const {
        if (p.is_infinity()) return is_cofinite();
        bool in_base = base_.count(*p.index) != 0;
        return is_finite() ? in_base : !in_base;
    }

    std::size_t max_index() const noexcept { return base_.empty() ? 0 : *base_.rbegin(); }

    friend bool operator==(const Clopen&, const Clopen&) = default;

    std::string to_string() const {
        if (is_whole()) return "N*";
        std::string out = is_finite() ? "{" : "N*\\{";
        bool first = true;
        for (auto n : base_) {
            if (!first) out += ",";
            out += std::to_string(n);
            first = false;
        }
        return out + "}";
    }

private:
    Clopen(Kind k, std::set<std::size_t> b) : kind_(k), base_(std::move(b)) {
        for (auto n : base_)
            if (n == 0) throw std::out_of_range("clopen base indices start at 1");
    }

    Kind kind_ = Kind::finite;
    std::set<std::size_t> base_;
};

namespace detail {

inline std::set<std::size_t> set_union(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
    std::set<std::size_t> r = a;
    r.insert(b.begin(), b.end());
    return r;
}

inline std::set<std::size_t> set_intersection(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
    std::set<std::size_t> r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

inline std::set<std::size_t> set_difference(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
    std::set<std::size_t> r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

} // namespace detail

inline Clopen complement(const Clopen& a) {
    return a.is_finite() ? Clopen::cofinite(a.base()) : Clopen::finite(a.base());
}

inline Clopen intersect(const Clopen& a, const Clopen& b) {
    using detail::set_difference, detail::set_intersection, detail::set_union;
    if (a.is_finite() && b.is_finite()) return Clopen::finite(set_intersection(a.base(), b.base()));
    if (a.is_finite()) return Clopen::finite(set_difference(a.base(), b.base()));
    if (b.is_finite()) return Clopen::finite(set_difference(b.base(), a.base()));
    return Clopen::cofinite(set_union(a.base(), b.base()));
}

inline Clopen unite(const Clopen& a, const Clopen& b) { return complement(intersect(complement(a), complement(b))); }

inline Clopen difference(const Clopen& a, const Clopen& b) { return intersect(a, complement(b)); }

enum class ClopenOp { unite, intersect, complement };

/// complement ignores `b`.
inline Clopen clopen_algebra(ClopenOp op, const Clopen& a, const Clopen& b = Clopen{}) {
    switch (op) {
    case ClopenOp::unite: return unite(a, b);
    case ClopenOp::intersect: return intersect(a, b);
    case ClopenOp::complement: return complement(a);
    }
    return {};
}

/// eta_C as an element of C(N*).
inline NStarFunction indicator(const Clopen& c) {
    Vector d;
    Scalar sign = c.is_finite() ? Scalar(1) : Scalar(-1);
    for (auto n : c.base()) d.set(n, sign);
    return {c.is_finite() ? Scalar{} : Scalar(1), std::move(d)};
}

namespace detail {

inline void check_family(const Clopen& c, const FamilyPtr& family) {
    if (c.max_index() > 0 && !family->covers(c.max_index()))
        throw error(errc::family_too_small, "clopen index " + std::to_string(c.max_index()) + " exceeds family size " +
                                                std::to_string(*family->size()));
}

} // namespace detail

/**
 * m(C): theta for the empty set, Id for N*, P_{n1}+...+P_{nk} for a finite
 * set and Id - (P_{n1}+...+P_{nk}) for the complement of one.
 */
inline SpectralOperator measure(const Clopen& c, FamilyPtr family = OrthonormalFamily::canonical()) {
    detail::check_family(c, family);
    return inverse_gelfand(indicator(c), std::move(family));
}

struct TaggedPiece {
    Clopen piece;
    NStarPoint tag;
};

/// A clopen partition of some set, with one tag point per piece.
struct TaggedPartition {
    std::vector<TaggedPiece> pieces;

    /// Union of the pieces; throws InvalidPartition if they are not a valid
    /// tagged partition (overlap, tag outside its piece, empty piece).
    Clopen validate() const {
        Clopen acc;
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            const auto& [piece, tag] = pieces[k];
            if (piece.is_empty()) throw error(errc::invalid_partition, "piece " + std::to_string(k + 1) + " is empty");
            if (!piece.contains(tag))
                throw error(errc::invalid_partition,
                            "tag " + tag.to_string() + " is not in piece " + std::to_string(k + 1) + " " + piece.to_string());
            if (!intersect(acc, piece).is_empty())
                throw error(errc::invalid_partition, "piece " + std::to_string(k + 1) + " overlaps an earlier piece");
            acc = unite(acc, piece);
        }
        return acc;
    }
};

/// omega_alpha(f, m, C) = sum_k f(x_k) m(C_k).
inline SpectralOperator riemann_sum(const NStarFunction& f, const TaggedPartition& p,
                                    FamilyPtr family = OrthonormalFamily::canonical()) {
    p.validate();
    SpectralOperator acc = SpectralOperator::zero(family);
    for (const auto& [piece, tag] : p.pieces) acc = acc + f(tag) * measure(piece, family);
    return acc;
}

/// f * eta_C in C(N*).
inline NStarFunction restrict_to(const NStarFunction& f, const Clopen& c) {
    Vector d;
    if (c.is_finite()) {
        for (auto n : c.base()) d.set(n, f(n));
        return {Scalar{}, std::move(d)};
    }
    for (const auto& [n, s] : f.deviations().entries())
        if (c.base().count(n) == 0) d.set(n, s);
    for (auto n : c.base()) d.set(n, -f.at_infinity());
    return {f.at_infinity(), std::move(d)};
}

/// int_C f dm = inverse_gelfand(f eta_C), the limit of the Riemann net.
inline SpectralOperator integrate(const NStarFunction& f, const Clopen& c,
                                  FamilyPtr family = OrthonormalFamily::canonical()) {
    detail::check_family(c, family);
    return inverse_gelfand(restrict_to(f, c), std::move(family));
}

/**
 * Refinement chain inside C: step k isolates the first k points of
 * support(d) u base(C) that lie in C, each tagged by itself; the remainder
 * is tagged at infinity (cofinite C) or at its least element (finite C).
 * Successive steps refine each other, and the last step separates every
 * point where f eta_C deviates from a constant.
 */
inline std::vector<TaggedPartition> refinement_chain(const NStarFunction& f, const Clopen& c) {
    std::set<std::size_t> relevant = c.base();
    for (const auto& [n, _] : f.deviations().entries()) relevant.insert(n);
    std::vector<std::size_t> points;
    for (auto n : relevant)
        if (c.contains(NStarPoint::at(n))) points.push_back(n);

    std::vector<TaggedPartition> chain;
    if (c.is_empty()) return chain;
    for (std::size_t k = 0; k <= points.size(); ++k) {
        TaggedPartition p;
        std::set<std::size_t> isolated(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(k));
        for (auto n : isolated) p.pieces.push_back({Clopen::finite({n}), NStarPoint::at(n)});
        Clopen rest = difference(c, Clopen::finite(isolated));
        if (!rest.is_empty()) {
            NStarPoint tag = rest.is_cofinite() ? NStarPoint::infinity() : NStarPoint::at(*rest.base().begin());
            p.pieces.push_back({rest, tag});
        }
        chain.push_back(std::move(p));
    }
    return chain;
}

/// m_{x,y}(C) = <m(C) x, y>.
class ScalarMeasureView {
public:
    ScalarMeasureView(Vector x, Vector y, FamilyPtr family = OrthonormalFamily::canonical())
        : x_(std::move(x)), y_(std::move(y)), family_(std::move(family)) {}

    const Vector& x() const noexcept { return x_; }
    const Vector& y() const noexcept { return y_; }
    const FamilyPtr& family() const noexcept { return family_; }

    Scalar value(const Clopen& c, int precision = kDefaultPrecision) const {
        return inner_product(apply(measure(c, family_), x_, precision), y_);
    }

    /// int f dm_{x,y} = <(int f dm)(x), y>.
    Scalar integrate(const NStarFunction& f, int precision = kDefaultPrecision) const {
        return inner_product(apply(ultraspec::integrate(f, Clopen::whole(), family_), x_, precision), y_);
    }

private:
    Vector x_;
    Vector y_;
    FamilyPtr family_;
};

inline Scalar scalar_measure_value(const ScalarMeasureView& v, const Clopen& c, int precision = kDefaultPrecision) {
    return v.value(c, precision);
}

inline Scalar scalar_integrate(const ScalarMeasureView& v, const NStarFunction& f, int precision = kDefaultPrecision) {
    return v.integrate(f, precision);
}

/// (Lambda_{ij}(f)) on span{e_1..e_N}.
struct MatrixRep {
    std::size_t dim = 0;
    MatrixOperator entries;
    NStarFunction source;

    /// ||A(f)||_M = sup_{ij} |Lambda_{ij}(f)|.
    NormValue norm() const { return entry_norm(entries); }
};

/**
 * Builds A(f) entry by entry as scalar integrals Lambda_{ij}(f) =
 * int f dm_{ij} = <H e_i, e_j>, H = inverse_gelfand(f).
 */
inline MatrixRep matrix_rep(const NStarFunction& f, FamilyPtr family, std::size_t dim,
                            int precision = kDefaultPrecision) {
    if (!family) family = OrthonormalFamily::canonical();
    const SpectralOperator h = inverse_gelfand(f, family);
    for (const auto& [k, _] : f.deviations().entries())
        if (family->member_extent(k) > dim)
            throw error(errc::dimension_too_small, "member " + std::to_string(k) + " reaches index " +
                                                       std::to_string(family->member_extent(k)) + " > N=" +
                                                       std::to_string(dim));
    MatrixRep rep{dim, MatrixOperator(dim), f};
    for (std::size_t i = 1; i <= dim; ++i) {
        const Vector hi = apply(h, Vector::unit(i), precision);
        for (std::size_t j = 1; j <= dim; ++j) rep.entries.at(i, j) = inner_product(hi, Vector::unit(j));
    }
    return rep;
}

} // namespace ultraspec
