#pragma once

/**
 * @file lt_subalgebra.hpp
 * @brief The closed subalgebra L_T generated by Id and T_lambda: spectrum,
 * polynomial calculus, resolvent, idempotents and the spectral measure on
 * clopen subsets of sigma(T_lambda).
 *
 * Indices n ~ m when lambda_n = lambda_m. Via the Gelfand transform, an
 * element alpha Id + T_mu lies in L_T exactly when mu is constant on every
 * class and vanishes where lambda does, i.e. when its Gelfand image factors
 * through a function on sigma(T_lambda).
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultraspec/c0space.hpp"
#include "ultraspec/gelfand.hpp"
#include "ultraspec/kfield.hpp"

namespace ultraspec {

struct SpectrumClass {
    Scalar value;                     // nonzero eigenvalue
    std::vector<std::size_t> indices; // { n : lambda_n = value }, ascending
};

/// sigma(T_lambda): the distinct nonzero entries of lambda, plus 0.
struct Spectrum {
    std::vector<SpectrumClass> classes; // in order of first occurrence

    std::optional<std::size_t> class_of(const Scalar& v) const {
        for (std::size_t c = 0; c < classes.size(); ++c)
            if (classes[c].value == v) return c;
        return std::nullopt;
    }

    bool contains(const Scalar& v) const { return v.is_exact_zero() || class_of(v).has_value(); }

    // Nonzero eigenvalues followed by 0.
    std::vector<Scalar> eigenvalues() const {
        std::vector<Scalar> out;
        for (const auto& c : classes) out.push_back(c.value);
        out.emplace_back();
        return out;
    }
};

inline Spectrum spectrum_of(const Vector& lambda) {
    Spectrum s;
    for (const auto& [n, v] : lambda.entries()) {
        if (auto c = s.class_of(v))
            s.classes[*c].indices.push_back(n);
        else
            s.classes.push_back({v, {n}});
    }
    return s;
}

/// alpha_0 Id + T_{sum_{m>=1} alpha_m lambda^m}, powers taken coordinatewise.
inline SpectralOperator poly_eval(const std::vector<Scalar>& coeffs, const Vector& lambda,
                                  FamilyPtr family = OrthonormalFamily::canonical()) {
    Scalar alpha = coeffs.empty() ? Scalar{} : coeffs[0];
    Vector mu;
    Vector lambda_pow = lambda;
    for (std::size_t m = 1; m < coeffs.size(); ++m) {
        if (m > 1) lambda_pow = hadamard(lambda_pow, lambda);
        mu += coeffs[m] * lambda_pow;
    }
    return {std::move(alpha), std::move(mu), std::move(family)};
}

/**
 * R_z(T_lambda) = (1/z) Id + (1/z) T_w with w_i = lambda_i / (z - lambda_i).
 *
 * Every inverse is taken far enough that (z Id - T_lambda) R_z and
 * R_z (z Id - T_lambda) both equal Id modulo t^precision. Throws
 * SpectralPoint when z is 0 or an entry of lambda.
 */
inline SpectralOperator resolvent(const Scalar& z, const Vector& lambda,
                                  FamilyPtr family = OrthonormalFamily::canonical(),
                                  int precision = kDefaultPrecision) {
    if (z.is_exact_zero() || spectrum_of(lambda).contains(z))
        throw error(errc::spectral_point, "z lies in σ(T_λ)");
    // Valuations above 0 do not lower the work precision: R itself must be
    // exact below t^precision too.
    long lowest = std::min(0L, z.valuation_bound());
    std::vector<std::pair<std::size_t, Scalar>> gaps;
    for (const auto& [i, l] : lambda.entries()) {
        Scalar g = z - l;
        lowest = std::min(lowest, g.valuation_bound());
        gaps.emplace_back(i, std::move(g));
    }
    // z * (1/z) and (z - lambda_i) / (z - lambda_i) are then exact below t^precision.
    const int abs_prec = static_cast<int>(static_cast<long>(precision) - lowest);
    Scalar r = inverse(z, abs_prec);
    Vector mu;
    for (const auto& [i, g] : gaps) mu.set(i, inverse(g, abs_prec) - r);
    return {std::move(r), std::move(mu), std::move(family)};
}

/// A function on sigma(T_lambda): its value at 0 and at each nonzero eigenvalue.
struct ValueTable {
    Scalar at_zero;
    std::vector<std::pair<Scalar, Scalar>> values; // (eigenvalue, value)

    std::optional<Scalar> lookup(const Scalar& eigenvalue) const {
        if (eigenvalue.is_exact_zero()) return at_zero;
        for (const auto& [e, v] : values)
            if (e == eigenvalue) return v;
        return std::nullopt;
    }
};

struct MembershipResult {
    bool member = false;
    std::optional<ValueTable> factored;                           // G_H as a function on sigma
    std::optional<std::pair<NStarPoint, NStarPoint>> violation;    // n ~ m with mu_n != mu_m
};

/**
 * Decides H in L_{T_lambda}. The witness is either the factored function on
 * sigma(T_lambda) or a pair of equivalent points where G_H differs; an index
 * where lambda vanishes is equivalent to the point at infinity.
 */
inline MembershipResult membership(const SpectralOperator& h, const Vector& lambda) {
    const Spectrum s = spectrum_of(lambda);
    const Vector& mu = h.lambda();
    for (const auto& [n, m] : mu.entries())
        if (lambda[n].is_exact_zero() && !m.is_exact_zero())
            return {false, std::nullopt, std::make_pair(NStarPoint::at(n), NStarPoint::infinity())};
    ValueTable table{h.alpha(), {}};
    for (const auto& cls : s.classes) {
        const std::size_t first = cls.indices.front();
        for (std::size_t k = 1; k < cls.indices.size(); ++k)
            if (!(mu[cls.indices[k]] == mu[first]))
                return {false, std::nullopt, std::make_pair(NStarPoint::at(first), NStarPoint::at(cls.indices[k]))};
        table.values.emplace_back(cls.value, h.alpha() + mu[first]);
    }
    return {true, std::move(table), std::nullopt};
}

struct Idempotent {
    enum class Form { sum_of_p, id_minus_sum_of_p };

    Form form = Form::sum_of_p;
    std::vector<std::size_t> indices;
    SpectralOperator as_operator;

    std::string to_string() const {
        std::string out = form == Form::sum_of_p ? "SumOfP{" : "IdMinusSumOfP{";
        for (std::size_t k = 0; k < indices.size(); ++k) out += (k ? "," : "") + std::to_string(indices[k]);
        return out + "}";
    }
};

/// E = sum P_i (alpha = 0) or E = Id - sum P_j (alpha = 1); anything else is not idempotent.
inline Idempotent classify_idempotent(const SpectralOperator& h) {
    if (!(h * h == h)) throw error(errc::not_idempotent, h.to_string() + " is not idempotent");
    Idempotent e;
    e.as_operator = h;
    e.form = h.alpha().is_exact_zero() ? Idempotent::Form::sum_of_p : Idempotent::Form::id_minus_sum_of_p;
    for (const auto& [i, _] : h.lambda().entries()) e.indices.push_back(i);
    return e;
}

/// A clopen subset of a finite sigma(T_lambda): a finite set of nonzero
/// eigenvalues, or the complement of one (which contains 0).
class SigmaClopen {
public:
    enum class Kind { finite_nonzero, cofinite_with_zero };

    SigmaClopen() = default;

    static SigmaClopen finite(std::vector<Scalar> values) { return {Kind::finite_nonzero, std::move(values)}; }
    static SigmaClopen cofinite(std::vector<Scalar> excluded) { return {Kind::cofinite_with_zero, std::move(excluded)}; }

    Kind kind() const noexcept { return kind_; }
    const std::vector<Scalar>& values() const noexcept { return values_; }
    bool is_empty() const noexcept { return kind_ == Kind::finite_nonzero && values_.empty(); }

    bool contains(const Scalar& v) const {
        if (v.is_exact_zero()) return kind_ == Kind::cofinite_with_zero;
        bool listed = std::find(values_.begin(), values_.end(), v) != values_.end();
        return kind_ == Kind::finite_nonzero ? listed : !listed;
    }

    friend SigmaClopen complement(const SigmaClopen& a) {
        return {a.kind_ == Kind::finite_nonzero ? Kind::cofinite_with_zero : Kind::finite_nonzero, a.values_};
    }

    friend SigmaClopen intersect(const SigmaClopen& a, const SigmaClopen& b) {
        auto in = [](const std::vector<Scalar>& vs, const Scalar& v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); };
        std::vector<Scalar> out;
        if (a.kind_ == Kind::finite_nonzero || b.kind_ == Kind::finite_nonzero) {
            const SigmaClopen& f = a.kind_ == Kind::finite_nonzero ? a : b;
            const SigmaClopen& g = &f == &a ? b : a;
            for (const auto& v : f.values_)
                if (g.contains(v)) out.push_back(v);
            return {Kind::finite_nonzero, std::move(out)};
        }
        out = a.values_;
        for (const auto& v : b.values_)
            if (!in(out, v)) out.push_back(v);
        return {Kind::cofinite_with_zero, std::move(out)};
    }

    friend SigmaClopen unite(const SigmaClopen& a, const SigmaClopen& b) {
        return complement(intersect(complement(a), complement(b)));
    }

private:
    SigmaClopen(Kind k, std::vector<Scalar> vs) : kind_(k) {
        for (auto& v : vs) {
            if (v.is_exact_zero()) throw std::invalid_argument("0 cannot be listed in a sigma clopen");
            if (std::find(values_.begin(), values_.end(), v) == values_.end()) values_.push_back(std::move(v));
        }
    }

    Kind kind_ = Kind::finite_nonzero;
    std::vector<Scalar> values_;
};

/**
 * m_{T_lambda}(C) = E_C: the sum of P_n over every index n whose eigenvalue
 * lies in C (finite C), or Id minus that sum over the excluded eigenvalues.
 */
inline Idempotent sigma_measure(const SigmaClopen& c, const Vector& lambda,
                                FamilyPtr family = OrthonormalFamily::canonical()) {
    const Spectrum s = spectrum_of(lambda);
    std::vector<std::size_t> indices;
    for (const auto& v : c.values()) {
        auto cls = s.class_of(v);
        if (!cls) throw error(errc::unknown_eigenvalue, v.to_string() + " is not a nonzero eigenvalue");
        const auto& idx = s.classes[*cls].indices;
        indices.insert(indices.end(), idx.begin(), idx.end());
    }
    std::sort(indices.begin(), indices.end());
    Vector mu;
    const bool finite = c.kind() == SigmaClopen::Kind::finite_nonzero;
    for (auto n : indices) mu.set(n, Scalar(finite ? 1 : -1));
    Idempotent e;
    e.form = finite ? Idempotent::Form::sum_of_p : Idempotent::Form::id_minus_sum_of_p;
    e.indices = std::move(indices);
    e.as_operator = SpectralOperator(finite ? Scalar{} : Scalar(1), std::move(mu), std::move(family));
    return e;
}

/**
 * int_sigma f dm_{T_lambda} = f(0) Id + sum_classes (f(lambda_c) - f(0)) E_c.
 * Throws MissingValue if an eigenvalue has no value, UnknownEigenvalue if
 * the table names a value outside sigma(T_lambda).
 */
inline SpectralOperator sigma_integrate(const ValueTable& f, const Vector& lambda,
                                        FamilyPtr family = OrthonormalFamily::canonical()) {
    const Spectrum s = spectrum_of(lambda);
    for (const auto& [e, _] : f.values)
        if (!s.class_of(e)) throw error(errc::unknown_eigenvalue, e.to_string() + " is not a nonzero eigenvalue");
    Vector mu;
    for (const auto& cls : s.classes) {
        auto v = f.lookup(cls.value);
        if (!v) throw error(errc::missing_value, "no value for eigenvalue " + cls.value.to_string());
        Scalar jump = *v - f.at_zero;
        for (auto n : cls.indices) mu.set(n, jump);
    }
    return {f.at_zero, std::move(mu), std::move(family)};
}

/// The 2 * 2^k idempotents of L_{T_lambda}: sums over unions of classes and their complements.
inline std::vector<Idempotent> predicted_idempotents(const Vector& lambda, FamilyPtr family = OrthonormalFamily::canonical()) {
    const Spectrum s = spectrum_of(lambda);
    const std::size_t k = s.classes.size();
    std::vector<Idempotent> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<Scalar> chosen;
        for (std::size_t c = 0; c < k; ++c)
            if (mask & (std::size_t{1} << c)) chosen.push_back(s.classes[c].value);
        out.push_back(sigma_measure(SigmaClopen::finite(chosen), lambda, family));
        out.push_back(sigma_measure(SigmaClopen::cofinite(chosen), lambda, family));
    }
    return out;
}

} // namespace ultraspec
