#pragma once

// Independent reference computations. Nothing here calls the library's
// inverse, quotient, resolvent or eigen routines; only ring arithmetic
// (+, -, *) on Scalar is shared.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "ultraspec/gelfand.hpp"
#include "ultraspec/kfield.hpp"
#include "ultraspec/operators.hpp"

namespace oracle {

using ultraspec::MatrixOperator;
using ultraspec::Rational;
using ultraspec::Scalar;
using ultraspec::Vector;

// Lowest exponent with a nonzero coefficient, by scanning every stored term.
inline std::optional<long> lowest_exponent(const Scalar& s) {
    std::optional<long> low;
    for (const auto& [e, c] : s.terms())
        if (c != 0 && (!low || e < *low)) low = e;
    return low;
}

// Valuation of the sup norm: the lowest exponent over all entries.
inline std::optional<long> lowest_exponent(const std::vector<Scalar>& xs) {
    std::optional<long> low;
    for (const auto& s : xs)
        if (auto v = lowest_exponent(s); v && (!low || *v < *low)) low = v;
    return low;
}

// 1/a by long division of 1 by a, keeping every term below t^p.
inline Scalar series_inverse(const Scalar& a, int p) {
    const long v = *lowest_exponent(a);
    const Rational lead = a.terms().at(static_cast<int>(v));
    std::map<int, Rational> remainder{{0, Rational(1)}};
    std::map<int, Rational> quotient;
    while (!remainder.empty()) {
        const auto [e, c] = *remainder.begin();
        const int qe = static_cast<int>(e - v);
        if (qe >= p) break;
        const Rational q = c / lead;
        quotient[qe] += q;
        for (const auto& [ae, ac] : a.terms()) {
            Rational& slot = remainder[qe + ae];
            slot -= q * ac;
            if (slot == 0) remainder.erase(qe + ae);
        }
    }
    Scalar::Terms terms;
    for (const auto& [e, c] : quotient)
        if (c != 0) terms.emplace(e, c);
    return Scalar::from_terms(std::move(terms), p);
}

// M^{-1} by Gauss-Jordan elimination over Q((t)), pivoting on the entry of
// least valuation in each column, carried at absolute precision `work`.
inline std::optional<MatrixOperator> dense_inverse(const MatrixOperator& m, int work) {
    const std::size_t n = m.dim();
    std::vector<std::vector<Scalar>> a(n, std::vector<Scalar>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m.at(i + 1, j + 1);
        a[i][n + i] = Scalar(1);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::optional<std::size_t> piv;
        long best = 0;
        for (std::size_t r = col; r < n; ++r)
            if (auto v = lowest_exponent(a[r][col]); v && (!piv || *v < best)) {
                piv = r;
                best = *v;
            }
        if (!piv) return std::nullopt;
        std::swap(a[col], a[*piv]);
        const Scalar inv = series_inverse(a[col][col], work);
        for (auto& s : a[col]) s = (s * inv).truncated(work);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_exact_zero()) continue;
            const Scalar f = a[r][col];
            for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] = (a[r][k] - f * a[col][k]).truncated(work);
        }
    }
    MatrixOperator out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i + 1, j + 1) = a[i][n + j];
    return out;
}

// a == b modulo t^p, judged from the difference's terms and precision.
inline bool agree_mod(const Scalar& a, const Scalar& b, int p) {
    const Scalar d = a - b;
    if (d.precision() && *d.precision() < p) return false;
    for (const auto& [e, c] : d.terms())
        if (e < p && c != 0) return false;
    return true;
}

inline bool agree_mod(const MatrixOperator& a, const MatrixOperator& b, int p) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 1; i <= a.dim(); ++i)
        for (std::size_t j = 1; j <= a.dim(); ++j)
            if (!agree_mod(a.at(i, j), b.at(i, j), p)) return false;
    return true;
}

// Dense product, written out independently of compose().
inline MatrixOperator multiply(const MatrixOperator& a, const MatrixOperator& b) {
    const std::size_t n = a.dim();
    MatrixOperator c(n);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
            Scalar acc;
            for (std::size_t k = 1; k <= n; ++k) acc += a.at(i, k) * b.at(k, j);
            c.at(i, j) = acc;
        }
    return c;
}

// Matrix of alpha Id + sum lambda_k y_k y_k^T / <y_k,y_k>, built entry by
// entry from the definition. Only for families whose members have rational
// entries, so <y,y> is a nonzero rational.
inline MatrixOperator materialize(const ultraspec::SpectralOperator& h, std::size_t n) {
    MatrixOperator m(n);
    for (std::size_t i = 1; i <= n; ++i) m.at(i, i) = h.alpha();
    for (const auto& [k, lam] : h.lambda().entries()) {
        const Vector y = h.family()->member(k);
        Rational yy = 0;
        for (const auto& [i, yi] : y.entries()) yy += yi.coeff(0) * yi.coeff(0);
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 1; j <= n; ++j) {
                const Rational prod = y[i].coeff(0) * y[j].coeff(0);
                if (prod != 0) m.at(i, j) += Scalar(Rational(prod / yy)) * lam;
            }
    }
    return m;
}

} // namespace oracle
