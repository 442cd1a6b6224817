#pragma once

/**
 * @file gelfand.hpp
 * @brief The commutative unital algebra S_Y(c0) = { alpha Id + T_lambda }
 * and its Gelfand transform onto C(N*).
 *
 * For a fixed orthonormal family Y, T_lambda = sum lambda_i P_i where P_i is
 * the normal projection onto y(i). The characters of S_Y(c0) are phi_n
 * (n in N), phi_n(H) = alpha + lambda_n, and phi_0, phi_0(H) = alpha, which
 * plays the point at infinity of N*.
 */

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultraspec/c0space.hpp"
#include "ultraspec/kfield.hpp"
#include "ultraspec/operators.hpp"

namespace ultraspec {

/// H = alpha Id + sum_i lambda_i P_i with P_i the projection onto y(i).
class SpectralOperator {
public:
    SpectralOperator() : family_(OrthonormalFamily::canonical()) {}

    SpectralOperator(Scalar alpha, Vector lambda, FamilyPtr family = OrthonormalFamily::canonical())
        : alpha_(std::move(alpha)), lambda_(std::move(lambda)), family_(std::move(family)) {
        if (!family_) family_ = OrthonormalFamily::canonical();
        if (!lambda_.is_zero() && !family_->covers(lambda_.max_index()))
            throw error(errc::family_too_small, "lambda index " + std::to_string(lambda_.max_index()) +
                                                    " exceeds family size " + std::to_string(*family_->size()));
    }

    static SpectralOperator identity(FamilyPtr family = OrthonormalFamily::canonical()) {
        return {Scalar(1), Vector{}, std::move(family)};
    }

    static SpectralOperator zero(FamilyPtr family = OrthonormalFamily::canonical()) {
        return {Scalar{}, Vector{}, std::move(family)};
    }

    // P_k
    static SpectralOperator projection(std::size_t k, FamilyPtr family = OrthonormalFamily::canonical()) {
        return {Scalar{}, Vector::unit(k), std::move(family)};
    }

    const Scalar& alpha() const noexcept { return alpha_; }
    const Vector& lambda() const noexcept { return lambda_; }
    const FamilyPtr& family() const noexcept { return family_; }

    friend bool operator==(const SpectralOperator& a, const SpectralOperator& b) {
        return a.alpha_ == b.alpha_ && a.lambda_ == b.lambda_ && same_family(a.family_, b.family_);
    }

    /// Symbolic form such as "Id - P2" or "t*P1 + 3*P4".
    std::string to_string() const {
        std::vector<std::pair<Scalar, std::string>> terms;
        if (!alpha_.is_exact_zero()) terms.emplace_back(alpha_, "Id");
        for (const auto& [i, s] : lambda_.entries()) terms.emplace_back(s, "P" + std::to_string(i));
        if (terms.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [c, name] : terms) {
            bool neg = c.has_leading_term() && c.terms().size() == 1 && c.is_exact() && c.leading_coefficient() < 0;
            Scalar mag = neg ? -c : c;
            if (first)
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            if (mag == Scalar(1))
                out += name;
            else if (mag.terms().size() == 1 && mag.is_exact())
                out += mag.to_string() + "*" + name;
            else
                out += "(" + mag.to_string() + ")*" + name;
            first = false;
        }
        return out;
    }

private:
    Scalar alpha_;
    Vector lambda_;
    FamilyPtr family_;
};

/// A point of N* = N u {inf}.
struct NStarPoint {
    std::optional<std::size_t> index; // nullopt is the point at infinity

    static NStarPoint at(std::size_t n) { return {n}; }
    static NStarPoint infinity() { return {std::nullopt}; }

    bool is_infinity() const noexcept { return !index.has_value(); }

    friend bool operator==(const NStarPoint&, const NStarPoint&) = default;

    std::string to_string() const { return index ? std::to_string(*index) : "inf"; }
};

/**
 * Continuous function on N*: f(inf) = at_infinity, f(n) = at_infinity + d_n
 * with d finitely supported.
 */
class NStarFunction {
public:
    NStarFunction() = default;
    NStarFunction(Scalar at_infinity, Vector deviations)
        : at_infinity_(std::move(at_infinity)), deviations_(std::move(deviations)) {}

    static NStarFunction constant(Scalar c) { return {std::move(c), Vector{}}; }

    const Scalar& at_infinity() const noexcept { return at_infinity_; }
    const Vector& deviations() const noexcept { return deviations_; }

    Scalar operator()(const NStarPoint& p) const {
        if (p.is_infinity()) return at_infinity_;
        return at_infinity_ + deviations_[*p.index];
    }

    Scalar operator()(std::size_t n) const { return (*this)(NStarPoint::at(n)); }

    /// ||f||_inf = max(|f(inf)|, sup_n |f(n)|) = max(|f(inf)|, ||d||_inf).
    NormValue sup_norm() const {
        std::vector<Scalar> vals{at_infinity_};
        for (const auto& [n, _] : deviations_.entries()) vals.push_back((*this)(n));
        return norm_max(vals);
    }

    friend bool operator==(const NStarFunction&, const NStarFunction&) = default;

private:
    Scalar at_infinity_;
    Vector deviations_;
};

enum class AlgOp { add, mul };

/// (a1 Id + T_mu)(a2 Id + T_nu) = a1 a2 Id + T_{a1 nu + a2 mu + mu nu}.
inline SpectralOperator alg_combine(AlgOp op, const SpectralOperator& h1, const SpectralOperator& h2) {
    if (!same_family(h1.family(), h2.family())) throw error(errc::family_mismatch, "operators use different families");
    if (op == AlgOp::add) return {h1.alpha() + h2.alpha(), h1.lambda() + h2.lambda(), h1.family()};
    Vector mu = h1.alpha() * h2.lambda() + h2.alpha() * h1.lambda() + hadamard(h1.lambda(), h2.lambda());
    return {h1.alpha() * h2.alpha(), std::move(mu), h1.family()};
}

inline SpectralOperator operator+(const SpectralOperator& a, const SpectralOperator& b) {
    return alg_combine(AlgOp::add, a, b);
}

inline SpectralOperator operator*(const SpectralOperator& a, const SpectralOperator& b) {
    return alg_combine(AlgOp::mul, a, b);
}

inline SpectralOperator operator*(const Scalar& c, const SpectralOperator& h) {
    return {c * h.alpha(), c * h.lambda(), h.family()};
}

inline SpectralOperator operator-(const SpectralOperator& a, const SpectralOperator& b) {
    return a + Scalar(-1) * b;
}

/// ||alpha Id + T_lambda|| = max(|alpha|, ||lambda||_inf).
inline NormValue op_norm(const SpectralOperator& h) {
    return norm_max(h.alpha().valuation(), sup_norm(h.lambda()));
}

inline SpectralOperator power(const SpectralOperator& h, unsigned n) {
    if (n == 0) throw std::invalid_argument("power: exponent must be positive");
    SpectralOperator r = h;
    for (unsigned i = 1; i < n; ++i) r = r * h;
    return r;
}

/// phi_n(H) = alpha + lambda_n; phi_0 (the point at infinity) gives alpha.
inline Scalar character(const SpectralOperator& h, const NStarPoint& p) {
    if (p.is_infinity()) return h.alpha();
    return h.alpha() + h.lambda()[*p.index];
}

/// sup over all characters of |phi(H)|, phi_0 included.
inline NormValue spectral_norm(const SpectralOperator& h) {
    std::vector<Scalar> vals{character(h, NStarPoint::infinity())};
    for (const auto& [n, _] : h.lambda().entries()) vals.push_back(character(h, NStarPoint::at(n)));
    return norm_max(vals);
}

inline NStarFunction gelfand_transform(const SpectralOperator& h) { return {h.alpha(), h.lambda()}; }

inline SpectralOperator inverse_gelfand(const NStarFunction& f, FamilyPtr family = OrthonormalFamily::canonical()) {
    if (!family) family = OrthonormalFamily::canonical();
    const std::size_t top = f.deviations().max_index();
    if (top > 0 && !family->covers(top))
        throw error(errc::family_too_small,
                    "deviation index " + std::to_string(top) + " exceeds family size " + std::to_string(*family->size()));
    return {f.at_infinity(), f.deviations(), std::move(family)};
}

/// H(x) = alpha x + sum lambda_k P_k(x).
inline Vector apply(const SpectralOperator& h, const Vector& x, int precision = kDefaultPrecision) {
    Vector out = h.alpha() * x;
    for (const auto& [k, lam] : h.lambda().entries()) {
        Vector y = h.family()->member(k);
        Scalar c = quotient(inner_product(x, y), h.family()->self_inner(k), precision);
        out += (lam * c) * y;
    }
    return out;
}

/**
 * Matrix of H on span{e_1..e_N}: alpha delta_ij + sum_k lambda_k y_i y_j / <y,y>.
 * Throws DimensionTooSmall if a member carrying a nonzero lambda_k reaches
 * beyond N.
 */
inline MatrixOperator to_matrix(const SpectralOperator& h, std::size_t dim, int precision = kDefaultPrecision) {
    for (const auto& [k, _] : h.lambda().entries())
        if (h.family()->member_extent(k) > dim)
            throw error(errc::dimension_too_small, "member " + std::to_string(k) + " reaches index " +
                                                       std::to_string(h.family()->member_extent(k)) + " > N=" +
                                                       std::to_string(dim));
    MatrixOperator m(dim);
    for (std::size_t i = 1; i <= dim; ++i) m.at(i, i) = h.alpha();
    for (const auto& [k, lam] : h.lambda().entries()) {
        Vector y = h.family()->member(k);
        Scalar scale = quotient(lam, h.family()->self_inner(k), precision);
        for (const auto& [i, yi] : y.entries())
            for (const auto& [j, yj] : y.entries()) m.at(i, j) += scale * yi * yj;
    }
    return m;
}

namespace detail {

using QMatrix = std::vector<std::vector<Rational>>;

// Faddeev-LeVerrier: coefficients c_0..c_n of det(xI - A), c_n = 1.
inline std::vector<Rational> characteristic_polynomial(const QMatrix& a) {
    const std::size_t n = a.size();
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    QMatrix m(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t k = 1; k <= n; ++k) {
        QMatrix am(n, std::vector<Rational>(n, Rational(0)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (a[i][l] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) am[i][j] += a[i][l] * m[l][j];
            }
        for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
        m = std::move(am);
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
        c[n - k] = -tr / static_cast<long>(k);
    }
    return c;
}

inline Rational horner(const std::vector<Rational>& c, const Rational& x) {
    Rational acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

// Divide by (x - r), assuming r is a root.
inline std::vector<Rational> deflate(const std::vector<Rational>& c, const Rational& r) {
    const std::size_t n = c.size() - 1;
    std::vector<Rational> q(n);
    Rational carry = 0;
    for (std::size_t i = n; i-- > 0;) {
        carry = c[i + 1] + carry * r;
        q[i] = carry;
    }
    return q;
}

inline mpz_class lcm_denominators(const std::vector<Rational>& c) {
    mpz_class d = 1;
    for (const auto& q : c) d = lcm(d, mpz_class(q.get_den()));
    return d;
}

inline constexpr long kMaxRootSearch = 2'000'000;

/**
 * Rational roots of a monic rational polynomial, with multiplicity, in
 * descending order. A rational root r = y/D where D is the lcm of the
 * coefficient denominators, and |r| <= bound.
 */
inline std::vector<Rational> rational_roots(std::vector<Rational> c, const Rational& bound) {
    std::vector<Rational> roots;
    const mpz_class den = lcm_denominators(c);
    mpz_class limit_z = mpz_class(bound.get_num() * den / bound.get_den()) + 1;
    if (limit_z > kMaxRootSearch) throw error(errc::irrational_spectrum, "rational root search space too large");
    const long limit = limit_z.get_si();
    for (long y = limit; y >= -limit && c.size() > 1; --y) {
        Rational r(mpz_class(y), den);
        r.canonicalize();
        while (c.size() > 1 && horner(c, r) == 0) {
            roots.push_back(r);
            c = deflate(c, r);
        }
    }
    return roots;
}

// Basis of ker(A), each vector a primitive integer vector with positive leading entry.
inline std::vector<std::vector<Rational>> kernel_basis(QMatrix a) {
    const std::size_t n = a.size();
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t p = row;
        while (p < n && a[p][col] == 0) ++p;
        if (p == n) continue;
        std::swap(a[p], a[row]);
        Rational inv = 1 / a[row][col];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == row || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) a[r][j] -= f * a[row][j];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
        std::vector<Rational> v(n, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = -a[r][free];
        mpz_class d = 1, g = 0;
        for (const auto& x : v) d = lcm(d, mpz_class(x.get_den()));
        for (auto& x : v) {
            x *= d;
            g = gcd(g, mpz_class(x.get_num()));
        }
        Rational lead = 0;
        for (const auto& x : v)
            if (x != 0) {
                lead = x;
                break;
            }
        Rational scale = Rational(lead < 0 ? -1 : 1) / Rational(g);
        for (auto& x : v) x *= scale;
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace detail

/**
 * Writes a symmetric matrix as sum lambda_i P_i over an orthonormal family
 * (alpha = 0).
 *
 * Diagonal matrices decompose over the canonical basis with arbitrary
 * entries. Otherwise the entries must be rational constants and the
 * characteristic polynomial must split over Q; eigenvalues are listed in
 * descending order and each eigenspace is orthogonalized separately.
 */
inline SpectralOperator eigendecompose(const MatrixOperator& t) {
    if (!t.is_symmetric()) throw error(errc::non_symmetric, "matrix is not symmetric");
    const std::size_t n = t.dim();

    bool diagonal = true;
    for (std::size_t i = 1; i <= n && diagonal; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            if (i != j && !t.at(i, j).is_exact_zero()) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        Vector lambda;
        for (std::size_t i = 1; i <= n; ++i) lambda.set(i, t.at(i, i));
        return {Scalar{}, std::move(lambda), OrthonormalFamily::canonical()};
    }

    detail::QMatrix a(n, std::vector<Rational>(n));
    Rational bound = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        Rational row_sum = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            const Scalar& s = t.at(i, j);
            if (!s.is_rational_constant())
                throw error(errc::irrational_spectrum, "non-diagonal matrix with non-constant entry at (" +
                                                           std::to_string(i) + "," + std::to_string(j) + ")");
            a[i - 1][j - 1] = s.constant_term();
            row_sum += abs(a[i - 1][j - 1]);
        }
        bound = std::max(bound, row_sum);
    }

    std::vector<Rational> roots = detail::rational_roots(detail::characteristic_polynomial(a), bound);
    if (roots.size() != n)
        throw error(errc::irrational_spectrum, "characteristic polynomial does not split over Q (" +
                                                   std::to_string(roots.size()) + " of " + std::to_string(n) +
                                                   " rational roots)");

    std::vector<Vector> members;
    Vector lambda;
    for (std::size_t k = 0; k < roots.size();) {
        const Rational mu = roots[k];
        std::size_t mult = 0;
        while (k + mult < roots.size() && roots[k + mult] == mu) ++mult;
        detail::QMatrix shifted = a;
        for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= mu;
        auto basis = detail::kernel_basis(std::move(shifted));
        if (basis.size() != mult)
            throw error(errc::degenerate_gram, "eigenspace dimension " + std::to_string(basis.size()) +
                                                   " differs from multiplicity " + std::to_string(mult));
        std::vector<Vector> vs;
        for (const auto& b : basis) {
            Vector v;
            for (std::size_t i = 0; i < n; ++i) v.set(i + 1, Scalar(b[i]));
            vs.push_back(std::move(v));
        }
        auto local = gram_schmidt(vs);
        for (const auto& y : local->members()) {
            if (inner_product(y, y).is_exact_zero()) throw error(errc::degenerate_gram, "isotropic eigenvector");
            members.push_back(y);
            lambda.set(members.size(), Scalar(mu));
        }
        k += mult;
    }
    return {Scalar{}, std::move(lambda), OrthonormalFamily::from_members(std::move(members))};
}

} // namespace ultraspec
