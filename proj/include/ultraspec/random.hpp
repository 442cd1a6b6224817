#pragma once

/**
 * @file random.hpp
 * @brief Seeded generators of desk-scale objects for property checks.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ultraspec/c0space.hpp"
#include "ultraspec/gelfand.hpp"
#include "ultraspec/kfield.hpp"
#include "ultraspec/nstar_measure.hpp"
#include "ultraspec/operators.hpp"

namespace ultraspec {

inline constexpr std::uint64_t kDefaultSeed = 20150314;

/// ULTRASPEC_SEED if set and numeric, else kDefaultSeed.
inline std::uint64_t seed_from_env() {
    if (const char* s = std::getenv("ULTRASPEC_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end != s && *end == '\0') return v;
    }
    return kDefaultSeed;
}

class RandomObjects {
public:
    explicit RandomObjects(std::uint64_t seed = kDefaultSeed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    Rational rational(int max_num = 5, int max_den = 4) {
        int num = 0;
        while (num == 0) num = uniform(-max_num, max_num);
        Rational q(num, uniform(1, max_den));
        q.canonicalize();
        return q;
    }

    /// Nonzero exact Laurent polynomial with exponents in [lo, hi].
    Scalar scalar(int lo = -2, int hi = 4, int max_terms = 3) {
        Scalar::Terms terms;
        const int n = uniform(1, max_terms);
        for (int k = 0; k < n; ++k) terms[uniform(lo, hi)] = rational();
        Scalar s = Scalar::from_terms(std::move(terms));
        return s.is_exact_zero() ? Scalar(rational()) : s;
    }

    Scalar scalar_or_zero(double zero_prob, int lo = -2, int hi = 4) {
        return coin(zero_prob) ? Scalar{} : scalar(lo, hi);
    }

    /// Random vector supported in 1..dim (possibly theta when density is low).
    Vector vector(std::size_t dim, double density = 0.6, int lo = -2, int hi = 4) {
        Vector v;
        for (std::size_t i = 1; i <= dim; ++i)
            if (coin(density)) v.set(i, scalar(lo, hi));
        return v;
    }

    Vector nonzero_vector(std::size_t dim, double density = 0.6, int lo = -2, int hi = 4) {
        Vector v = vector(dim, density, lo, hi);
        if (v.is_zero()) v.set(static_cast<std::size_t>(uniform(1, static_cast<int>(dim))), scalar(lo, hi));
        return v;
    }

    /**
     * One of: the canonical basis; Gram-Schmidt of random rational vectors;
     * "rotation" pairs (a, b t), (-b t, a) whose <y,y> = a^2 + b^2 t^2 is not
     * a monomial. Without `allow_series` every <y,y> is a rational constant.
     */
    FamilyPtr family(std::size_t max_members = 4, bool allow_series = true) {
        switch (uniform(0, allow_series ? 2 : 1)) {
        case 0: return OrthonormalFamily::canonical();
        case 1: {
            const std::size_t k = static_cast<std::size_t>(uniform(1, static_cast<int>(max_members)));
            for (;;) {
                std::vector<Vector> vs;
                for (std::size_t i = 0; i < k; ++i) {
                    Vector v;
                    for (std::size_t j = 1; j <= k + 1; ++j)
                        if (coin(0.7)) v.set(j, Scalar(rational(3, 2)));
                    vs.push_back(v);
                }
                try {
                    return gram_schmidt(vs);
                } catch (const error&) {
                }
            }
        }
        default: {
            std::vector<Vector> ms;
            const std::size_t pairs = static_cast<std::size_t>(uniform(1, static_cast<int>(std::max<std::size_t>(1, max_members / 2))));
            for (std::size_t p = 0; p < pairs; ++p) {
                Scalar a(rational(3, 2));
                Scalar b = Scalar::monomial(rational(3, 2), uniform(1, 2));
                const std::size_t i = 2 * p + 1;
                Vector u, w;
                u.set(i, a);
                u.set(i + 1, b);
                w.set(i, -b);
                w.set(i + 1, a);
                ms.push_back(u);
                ms.push_back(w);
            }
            return OrthonormalFamily::from_members(std::move(ms));
        }
        }
    }

    // Indices usable with `fam`.
    std::size_t family_span(const FamilyPtr& fam, std::size_t canonical_span = 5) const {
        return fam->size() ? *fam->size() : canonical_span;
    }

    /**
     * alpha Id + T_lambda. With `hard`, |alpha| = ||lambda|| != 0 is forced,
     * often with alpha + lambda_n cancelling the leading term.
     */
    SpectralOperator spectral_operator(const FamilyPtr& fam, bool hard = false) {
        const std::size_t span = family_span(fam);
        Vector lambda = vector(span, 0.6, -1, 3);
        Scalar alpha = scalar_or_zero(0.25, -1, 3);
        if (hard) {
            if (lambda.is_zero()) lambda.set(1, scalar(-1, 3));
            const long v = sup_norm(lambda).valuation();
            alpha = Scalar::monomial(rational(), static_cast<int>(v)) + (coin() ? Scalar::t(static_cast<int>(v) + 1) : Scalar{});
            // Make some alpha + lambda_n lose its leading term.
            if (coin()) {
                for (const auto& [n, s] : lambda.entries())
                    if (s.leading_exponent() == v) {
                        lambda.set(n, -alpha + Scalar::monomial(rational(), static_cast<int>(v) + uniform(1, 3)));
                        break;
                    }
            }
        }
        return {alpha, lambda, fam};
    }

    NStarFunction nstar_function(std::size_t span = 5) {
        return {scalar_or_zero(0.2, -1, 3), vector(span, 0.5, -1, 3)};
    }

    Clopen clopen(std::size_t span = 6) {
        std::set<std::size_t> base;
        for (std::size_t i = 1; i <= span; ++i)
            if (coin(0.35)) base.insert(i);
        return coin() ? Clopen::finite(std::move(base)) : Clopen::cofinite(std::move(base));
    }

    /// lambda with repeated values: `classes` distinct nonzero values spread over `indices` slots.
    Vector lambda_with_classes(std::size_t classes, std::size_t indices) {
        std::vector<Scalar> values;
        while (values.size() < classes) {
            Scalar v = scalar(0, 3, 2);
            bool dup = false;
            for (const auto& w : values) dup = dup || w == v;
            if (!dup) values.push_back(v);
        }
        Vector lambda;
        std::vector<std::size_t> slots;
        for (std::size_t i = 1; i <= indices; ++i) slots.push_back(i);
        std::shuffle(slots.begin(), slots.end(), rng_);
        for (std::size_t k = 0; k < slots.size(); ++k) {
            // each class gets at least one index; the remainder spread at random or left zero
            if (k < classes)
                lambda.set(slots[k], values[k]);
            else if (coin(0.7))
                lambda.set(slots[k], values[static_cast<std::size_t>(uniform(0, static_cast<int>(classes) - 1))]);
        }
        return lambda;
    }

    std::mt19937_64& engine() noexcept { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace ultraspec
