#pragma once

/**
 * @file operators.hpp
 * @brief Bounded operators on c0, truncated to span{e_1..e_N}, as exact
 * matrices.
 *
 * T = sum alpha_{i,j} e'_j (x) e_i, so column j holds the coordinates of
 * T(e_j). Everything beyond N is taken to be exactly zero; analytic limit
 * statements become checks on decay profiles along growing truncations.
 */

#include <cstddef>
#include <string>
#include <vector>

#include "ultraspec/c0space.hpp"
#include "ultraspec/kfield.hpp"

namespace ultraspec {

class MatrixOperator {
public:
    MatrixOperator() = default;
    explicit MatrixOperator(std::size_t dim) : dim_(dim), a_(dim * dim) {}

    static MatrixOperator identity(std::size_t dim) {
        MatrixOperator m(dim);
        for (std::size_t i = 1; i <= dim; ++i) m.at(i, i) = Scalar(1);
        return m;
    }

    static MatrixOperator diagonal(const std::vector<Scalar>& d) {
        MatrixOperator m(d.size());
        for (std::size_t i = 1; i <= d.size(); ++i) m.at(i, i) = d[i - 1];
        return m;
    }

    /// Row-major literal; throws DimensionMismatch unless square.
    static MatrixOperator from_rows(const std::vector<std::vector<Scalar>>& rows) {
        MatrixOperator m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size())
                throw error(errc::dimension_mismatch, "matrix row " + std::to_string(i + 1) + " has " +
                                                          std::to_string(rows[i].size()) + " entries, expected " +
                                                          std::to_string(rows.size()));
            for (std::size_t j = 0; j < rows.size(); ++j) m.at(i + 1, j + 1) = rows[i][j];
        }
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }

    // 1-based (row, column).
    Scalar& at(std::size_t i, std::size_t j) { return a_[(i - 1) * dim_ + (j - 1)]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return a_[(i - 1) * dim_ + (j - 1)]; }

    const std::vector<Scalar>& entries() const noexcept { return a_; }

    // T(e_j)
    Vector column(std::size_t j) const {
        Vector v;
        for (std::size_t i = 1; i <= dim_; ++i) v.set(i, at(i, j));
        return v;
    }

    std::vector<std::vector<Scalar>> rows() const {
        std::vector<std::vector<Scalar>> r(dim_, std::vector<Scalar>(dim_));
        for (std::size_t i = 1; i <= dim_; ++i)
            for (std::size_t j = 1; j <= dim_; ++j) r[i - 1][j - 1] = at(i, j);
        return r;
    }

    bool is_symmetric() const {
        for (std::size_t i = 1; i <= dim_; ++i)
            for (std::size_t j = i + 1; j <= dim_; ++j)
                if (!(at(i, j) == at(j, i))) return false;
        return true;
    }

    MatrixOperator& operator+=(const MatrixOperator& o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }

    MatrixOperator& operator-=(const MatrixOperator& o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }

    friend MatrixOperator operator+(MatrixOperator a, const MatrixOperator& b) { return a += b; }
    friend MatrixOperator operator-(MatrixOperator a, const MatrixOperator& b) { return a -= b; }

    friend MatrixOperator operator*(const Scalar& c, MatrixOperator m) {
        for (auto& s : m.a_) s = c * s;
        return m;
    }

    friend bool operator==(const MatrixOperator&, const MatrixOperator&) = default;

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 1; i <= dim_; ++i) {
            out += i > 1 ? ", [" : "[";
            for (std::size_t j = 1; j <= dim_; ++j) {
                if (j > 1) out += ", ";
                out += at(i, j).to_string();
            }
            out += "]";
        }
        return out + "]";
    }

    void check_same_dim(const MatrixOperator& o) const {
        if (o.dim_ != dim_)
            throw error(errc::dimension_mismatch, "dimensions " + std::to_string(dim_) + " and " + std::to_string(o.dim_));
    }

private:
    std::size_t dim_ = 0;
    std::vector<Scalar> a_;
};

inline Vector apply(const MatrixOperator& T, const Vector& x) {
    if (x.max_index() > T.dim())
        throw error(errc::dimension_mismatch,
                    "vector index " + std::to_string(x.max_index()) + " exceeds dimension " + std::to_string(T.dim()));
    Vector y;
    for (std::size_t i = 1; i <= T.dim(); ++i) {
        Scalar acc;
        for (const auto& [j, s] : x.entries()) {
            const Scalar& a = T.at(i, j);
            if (!a.is_exact_zero()) acc += a * s;
        }
        y.set(i, std::move(acc));
    }
    return y;
}

/// Adjoint for the symmetric form <x,y> = sum x_i y_i: the transpose.
inline MatrixOperator adjoint(const MatrixOperator& T) {
    MatrixOperator r(T.dim());
    for (std::size_t i = 1; i <= T.dim(); ++i)
        for (std::size_t j = 1; j <= T.dim(); ++j) r.at(j, i) = T.at(i, j);
    return r;
}

inline MatrixOperator compose(const MatrixOperator& S, const MatrixOperator& T) {
    S.check_same_dim(T);
    const std::size_t n = S.dim();
    MatrixOperator r(n);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t k = 1; k <= n; ++k) {
            const Scalar& s = S.at(i, k);
            if (s.is_exact_zero()) continue;
            for (std::size_t j = 1; j <= n; ++j) {
                const Scalar& t = T.at(k, j);
                if (!t.is_exact_zero()) r.at(i, j) += s * t;
            }
        }
    return r;
}

/// ||T|| = sup_n ||T(e_n)||_inf.
inline NormValue operator_norm(const MatrixOperator& T) {
    NormValue n = NormValue::zero_norm();
    for (std::size_t j = 1; j <= T.dim(); ++j) n = norm_max(n, sup_norm(T.column(j)));
    return n;
}

/// ||T|| = sup_{i,j} |<T(e_i), e_j>|, the entrywise formula.
inline NormValue entry_norm(const MatrixOperator& T) { return norm_max(T.entries()); }

/// <S,T> = sum_n <S(e_n), T(e_n)>.
inline Scalar hs_inner(const MatrixOperator& S, const MatrixOperator& T) {
    S.check_same_dim(T);
    Scalar acc;
    for (std::size_t k = 0; k < S.entries().size(); ++k) {
        const Scalar& a = S.entries()[k];
        const Scalar& b = T.entries()[k];
        if (!a.is_exact_zero() && !b.is_exact_zero()) acc += a * b;
    }
    return acc;
}

enum class OperatorClass { A0, A1, compact };

inline std::string_view class_name(OperatorClass c) {
    switch (c) {
    case OperatorClass::A0: return "A0";
    case OperatorClass::A1: return "A1";
    case OperatorClass::compact: return "compact";
    }
    return "?";
}

/**
 * Finite-truncation evidence for membership in A0, A1 or the compact
 * operators. With the zero-tail rule every finite matrix passes the finite
 * check; `decaying` records whether the truncation already shows the
 * quantity that must tend to zero actually shrinking.
 *
 * profile: column norms ||T(e_n)|| for A1 and compact; for A0, the last
 * entry |<T(e_N), e_j>| of each generator row j < N.
 */
struct ClassCertificate {
    OperatorClass cls = OperatorClass::A0;
    std::size_t dim = 0;
    std::vector<NormValue> profile;
    bool finite_check = true;
    bool decaying = false;
};

namespace detail {

// Zero, or its last entry is strictly smaller in norm than its largest.
inline bool profile_decays(const std::vector<NormValue>& p) {
    if (p.empty()) return true;
    NormValue largest = NormValue::zero_norm();
    for (const auto& n : p) largest = norm_max(largest, n);
    return largest.is_zero_norm() || p.back() > largest;
}

inline NormValue checked_norm(std::span<const Scalar> values) {
    try {
        return norm_max(values);
    } catch (const error& e) {
        if (e.code() == errc::imprecise_zero) throw error(errc::unknown_tail, e.what());
        throw;
    }
}

inline ClassCertificate certify_compact(const MatrixOperator& T, OperatorClass cls) {
    ClassCertificate c{cls, T.dim(), {}, true, false};
    for (std::size_t j = 1; j <= T.dim(); ++j) {
        std::vector<Scalar> col = T.column(j).dense(T.dim());
        c.profile.push_back(checked_norm(col));
    }
    c.decaying = profile_decays(c.profile);
    return c;
}

inline ClassCertificate certify_a0(const MatrixOperator& T) {
    ClassCertificate c{OperatorClass::A0, T.dim(), {}, true, true};
    const std::size_t n = T.dim();
    for (std::size_t j = 1; j < n; ++j) {
        std::vector<Scalar> row(n);
        for (std::size_t i = 1; i <= n; ++i) row[i - 1] = T.at(j, i);
        std::vector<NormValue> profile;
        for (const auto& s : row) profile.push_back(checked_norm(std::span<const Scalar>(&s, 1)));
        c.profile.push_back(profile.back());
        if (!profile_decays(profile)) c.decaying = false;
    }
    return c;
}

} // namespace detail

inline ClassCertificate certify_class(const MatrixOperator& T, OperatorClass cls) {
    switch (cls) {
    case OperatorClass::compact: return detail::certify_compact(T, cls);
    case OperatorClass::A0: return detail::certify_a0(T);
    case OperatorClass::A1: {
        ClassCertificate c = detail::certify_compact(T, cls);
        c.decaying = c.decaying && detail::certify_a0(T).decaying;
        return c;
    }
    }
    return {};
}

} // namespace ultraspec
