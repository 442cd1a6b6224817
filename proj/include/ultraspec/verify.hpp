#pragma once

/**
 * @file verify.hpp
 * @brief The invariant catalogue run by `ultraspec verify`.
 *
 * Each suite draws its own seeded random cases, adds any user-supplied
 * objects that fit, and reports the first violating witness.
 */

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ultraspec/c0space.hpp"
#include "ultraspec/gelfand.hpp"
#include "ultraspec/io.hpp"
#include "ultraspec/kfield.hpp"
#include "ultraspec/lt_subalgebra.hpp"
#include "ultraspec/nstar_measure.hpp"
#include "ultraspec/operators.hpp"
#include "ultraspec/random.hpp"

namespace ultraspec {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string witness; // first violation, empty when green

    bool passed() const noexcept { return failures == 0; }
};

struct VerifyOptions {
    std::uint64_t seed = kDefaultSeed;
    std::size_t cases = 25;
    int precision = kDefaultPrecision;
};

/// Extra objects checked alongside the random ones.
struct VerifyInputs {
    std::vector<Scalar> scalars;
    std::vector<Vector> vectors;
    std::vector<MatrixOperator> matrices;
    std::vector<SpectralOperator> operators;
    std::vector<NStarFunction> functions;
    std::vector<Clopen> clopens;
    std::vector<Vector> lambdas;
};

namespace detail {

class Tally {
public:
    explicit Tally(std::string name) { r_.name = std::move(name); }

    /// Runs one case; `body` returns an empty string on success or a witness.
    /// An unexpected exception is a failure too.
    void run(const std::function<std::string()>& body) {
        ++r_.cases;
        std::string w;
        try {
            w = body();
        } catch (const std::exception& e) {
            w = std::string("unexpected exception: ") + e.what();
        }
        if (!w.empty()) {
            if (r_.failures == 0) r_.witness = w;
            ++r_.failures;
        }
    }

    SuiteResult result() && { return std::move(r_); }

private:
    SuiteResult r_;
};

inline std::string ok() { return {}; }

/// Smallest N whose truncation holds every member touched by lambda, plus one
/// spare coordinate on which H acts as alpha.
inline std::size_t sufficient_dim(const Vector& lambda, const FamilyPtr& fam) {
    std::size_t n = 0;
    for (const auto& [k, _] : lambda.entries()) n = std::max(n, fam->member_extent(k));
    if (!fam->is_canonical())
        for (std::size_t k = 1; k <= *fam->size(); ++k) n = std::max(n, fam->member_extent(k));
    return n + 1;
}

inline bool matrix_congruent(const MatrixOperator& a, const MatrixOperator& b, int p) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        if (!congruent_mod(a.entries()[k], b.entries()[k], p)) return false;
    return true;
}

inline bool is_zero_matrix(const MatrixOperator& m) {
    for (const auto& s : m.entries())
        if (!s.is_exact_zero()) return false;
    return true;
}

/// Symmetric idempotent with <u,w> = 0 for u in kernel, w in range.
inline std::string normal_projection_witness(const MatrixOperator& m) {
    if (!(compose(m, m) == m)) return "matrix is not idempotent:\n" + m.to_string();
    MatrixOperator kernel_part = MatrixOperator::identity(m.dim()) - m;
    if (!is_zero_matrix(compose(adjoint(kernel_part), m))) return "kernel not orthogonal to range:\n" + m.to_string();
    return {};
}

inline Vector rational_vector(RandomObjects& rnd, std::size_t dim) {
    Vector v;
    for (std::size_t i = 1; i <= dim; ++i)
        if (rnd.coin(0.7)) v.set(i, Scalar(rnd.rational(3, 2)));
    if (v.is_zero()) v.set(1, Scalar(1));
    return v;
}

/// Sum d_k q_k q_k^T / <q_k,q_k> over a random rational orthogonal basis.
inline MatrixOperator symmetric_with_rational_spectrum(RandomObjects& rnd, std::size_t n) {
    std::vector<Vector> qs;
    for (;;) {
        qs.clear();
        for (std::size_t k = 0; k < n; ++k) {
            Vector q;
            for (std::size_t i = 1; i <= n; ++i)
                if (rnd.coin(0.6)) q.set(i, Scalar(rnd.uniform(-2, 2)));
            qs.push_back(q);
        }
        try {
            qs = gram_schmidt(qs)->members();
            break;
        } catch (const error&) {
        }
    }
    std::vector<Rational> d;
    for (std::size_t k = 0; k < n; ++k)
        d.push_back(k > 0 && rnd.coin(0.25) ? d.back() : (rnd.coin(0.15) ? Rational(0) : rnd.rational(4, 2)));
    MatrixOperator t(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (d[k] == 0) continue;
        Scalar scale = quotient(Scalar(d[k]), inner_product(qs[k], qs[k]));
        for (const auto& [i, qi] : qs[k].entries())
            for (const auto& [j, qj] : qs[k].entries()) t.at(i, j) += scale * qi * qj;
    }
    return t;
}

inline SigmaClopen random_sigma_clopen(RandomObjects& rnd, const Spectrum& s) {
    std::vector<Scalar> vs;
    for (const auto& c : s.classes)
        if (rnd.coin()) vs.push_back(c.value);
    return rnd.coin() ? SigmaClopen::finite(vs) : SigmaClopen::cofinite(vs);
}

inline NormValue table_norm(const ValueTable& f) {
    NormValue n = f.at_zero.valuation();
    for (const auto& [_, v] : f.values) n = norm_max(n, v.valuation());
    return n;
}

} // namespace detail

namespace suites {

using detail::ok;
using detail::Tally;

inline SuiteResult scalar_ultrametric(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("scalar ultrametric");
    auto check = [&](const Scalar& a, const Scalar& b) {
        t.run([&] {
            const NormValue va = a.valuation(), vb = b.valuation();
            if (!((a * b).valuation() == va * vb)) return "v(ab) != v(a)+v(b) for a=" + a.to_string() + ", b=" + b.to_string();
            const NormValue vs = (a + b).valuation();
            if (vs < norm_max(va, vb)) return "strong triangle fails for a=" + a.to_string() + ", b=" + b.to_string();
            if (!(va == vb) && !(vs == norm_max(va, vb)))
                return "v(a+b) != min(v(a),v(b)) with v(a) != v(b) for a=" + a.to_string() + ", b=" + b.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        Scalar a = rnd.scalar_or_zero(0.1);
        Scalar b = rnd.coin(0.2) ? -a + rnd.scalar(3, 6) : rnd.scalar_or_zero(0.1);
        check(a, b);
    }
    for (const auto& s : in.scalars)
        if (s.is_exact()) check(s, rnd.scalar());
    return std::move(t).result();
}

inline SuiteResult formal_reality(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("sum of squares valuation");
    auto check = [&](const std::vector<Scalar>& xs) {
        t.run([&] {
            Scalar sum;
            long lowest = 0;
            bool first = true;
            for (const auto& x : xs) {
                sum += x * x;
                lowest = first ? x.leading_exponent() : std::min<long>(lowest, x.leading_exponent());
                first = false;
            }
            if (!(sum.valuation() == NormValue::of_valuation(2 * lowest))) return "v(sum x_i^2) = " + sum.valuation().to_string() + " for sum " + sum.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        std::vector<Scalar> xs;
        const int n = rnd.uniform(1, 5);
        for (int i = 0; i < n; ++i) xs.push_back(rnd.scalar());
        check(xs);
    }
    for (const auto& s : in.scalars)
        if (s.is_exact() && !s.is_exact_zero()) check({s, rnd.scalar()});
    return std::move(t).result();
}

inline SuiteResult scalar_inverse(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("scalar inverse contract");
    auto check = [&](const Scalar& a, int p) {
        t.run([&] {
            const Scalar b = inverse(a, p);
            const int target = p + a.leading_exponent();
            if (!congruent_mod(a * b, Scalar(1), target))
                return "a*inv(a," + std::to_string(p) + ") != 1 mod t^" + std::to_string(target) + " for a=" + a.to_string();
            if (a.is_monomial() && !(a * b == Scalar(1))) return "monomial inverse is not exact for a=" + a.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.scalar(), rnd.uniform(0, o.precision));
    for (const auto& s : in.scalars)
        if (s.has_leading_term() && s.is_exact()) check(s, o.precision);
    return std::move(t).result();
}

inline SuiteResult norm_coincidence(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("norm coincidence <x,x>");
    auto check = [&](const Vector& x) {
        t.run([&] {
            const NormValue n = sup_norm(x);
            if (!(inner_product(x, x).valuation() == n * n)) return "v(<x,x>) != 2 v(||x||) for x=" + x.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.vector(6, 0.6));
    for (const auto& v : in.vectors)
        if (std::all_of(v.entries().begin(), v.entries().end(), [](const auto& e) { return e.second.is_exact(); })) check(v);
    return std::move(t).result();
}

inline SuiteResult cauchy_schwarz(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("inner product bound");
    auto check = [&](const Vector& x, const Vector& y) {
        t.run([&] {
            if (inner_product(x, y).valuation() < sup_norm(x) * sup_norm(y))
                return "|<x,y>| > ||x|| ||y|| for x=" + x.to_string() + ", y=" + y.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.vector(6), rnd.vector(6));
    for (const auto& v : in.vectors) check(v, rnd.vector(6));
    return std::move(t).result();
}

inline SuiteResult gram_schmidt_suite(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("gram-schmidt orthonormality");
    auto check = [&](const std::vector<Vector>& vs) {
        t.run([&] {
            FamilyPtr fam;
            try {
                fam = gram_schmidt(vs);
            } catch (const error& e) {
                return e.code() == errc::dependent_input ? ok() : std::string(e.what());
            }
            const auto& ms = fam->members();
            for (std::size_t i = 0; i < ms.size(); ++i) {
                if (!(sup_norm(ms[i]) == NormValue::of_valuation(0))) return "member " + ms[i].to_string() + " does not have norm 1";
                for (std::size_t j = 0; j < i; ++j)
                    if (!inner_product(ms[i], ms[j]).is_exact_zero())
                        return "members " + ms[j].to_string() + " and " + ms[i].to_string() + " are not orthogonal";
            }
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        std::vector<Vector> vs;
        const int k = rnd.uniform(1, 4);
        for (int i = 0; i < k; ++i) vs.push_back(rnd.nonzero_vector(4, 0.6, -1, 2));
        check(vs);
    }
    if (!in.vectors.empty()) check(in.vectors);
    return std::move(t).result();
}

inline SuiteResult projection(RandomObjects& rnd, const VerifyInputs&, const VerifyOptions& o) {
    Tally t("normal projection onto a line");
    for (std::size_t c = 0; c < o.cases; ++c) {
        // <y,y> is a monomial here so every division is exact.
        const Vector y = Scalar::t(rnd.uniform(-1, 2)) * detail::rational_vector(rnd, 5);
        const Vector x1 = rnd.vector(5), x2 = rnd.vector(5);
        const Scalar k = rnd.scalar();
        t.run([&] {
            if (!(project(y, x1 + k * x2) == project(y, x1) + k * project(y, x2))) return "projection onto " + y.to_string() + " is not linear";
            const Vector p = project(y, x1);
            if (!(project(y, p) == p)) return "projection onto " + y.to_string() + " is not idempotent";
            const Vector u = x1 - p;
            if (!project(y, u).is_zero()) return "x - P(x) is not in the kernel for y=" + y.to_string();
            if (!inner_product(u, project(y, x2)).is_exact_zero()) return "kernel not orthogonal to range for y=" + y.to_string();
            return ok();
        });
    }
    return std::move(t).result();
}

inline MatrixOperator random_matrix(RandomObjects& rnd, std::size_t n, double density = 0.5) {
    MatrixOperator m(n);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            if (rnd.coin(density)) m.at(i, j) = rnd.scalar(-1, 3);
    return m;
}

inline SuiteResult norm_formulas(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("operator norm: columns vs entries");
    auto check = [&](const MatrixOperator& m) {
        t.run([&] {
            if (!(operator_norm(m) == entry_norm(m)))
                return "column norm " + operator_norm(m).to_string() + " != entry norm " + entry_norm(m).to_string() + " for\n" + m.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(random_matrix(rnd, static_cast<std::size_t>(rnd.uniform(1, 5))));
    for (const auto& m : in.matrices) check(m);
    return std::move(t).result();
}

inline SuiteResult hs_inner_suite(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("Hilbert-Schmidt form");
    auto check = [&](const MatrixOperator& s, const MatrixOperator& m, const MatrixOperator& u, const Scalar& k) {
        t.run([&] {
            if (!(hs_inner(s, m) == hs_inner(m, s))) return std::string("<S,T> != <T,S>");
            if (!(hs_inner(s + k * u, m) == hs_inner(s, m) + k * hs_inner(u, m))) return std::string("<.,T> is not linear");
            if (!(hs_inner(m, m).valuation() == entry_norm(m) * entry_norm(m))) return "v(<T,T>) != 2 v(||T||) for\n" + m.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        const std::size_t n = static_cast<std::size_t>(rnd.uniform(1, 4));
        check(random_matrix(rnd, n), random_matrix(rnd, n), random_matrix(rnd, n), rnd.scalar());
    }
    for (const auto& m : in.matrices) check(random_matrix(rnd, m.dim()), m, random_matrix(rnd, m.dim()), rnd.scalar());
    return std::move(t).result();
}

inline SuiteResult adjoint_suite(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("adjoint involution and isometry");
    auto check = [&](const MatrixOperator& m) {
        t.run([&] {
            if (!(adjoint(adjoint(m)) == m)) return "T** != T for\n" + m.to_string();
            if (!(operator_norm(adjoint(m)) == operator_norm(m))) return "||T*|| != ||T|| for\n" + m.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(random_matrix(rnd, static_cast<std::size_t>(rnd.uniform(1, 5))));
    for (const auto& m : in.matrices) check(m);
    return std::move(t).result();
}

inline SuiteResult spectral_matrix(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("materialized operators: symmetric, compact when alpha=0");
    auto check = [&](const SpectralOperator& h) {
        t.run([&] {
            const MatrixOperator m = to_matrix(h, detail::sufficient_dim(h.lambda(), h.family()), o.precision);
            if (!(adjoint(m) == m)) return "to_matrix is not symmetric for " + h.to_string();
            if (h.alpha().is_exact_zero())
                for (auto cls : {OperatorClass::compact, OperatorClass::A1}) {
                    const ClassCertificate cert = certify_class(m, cls);
                    if (!cert.finite_check || !cert.decaying)
                        return std::string(class_name(cls)) + " certificate fails for " + h.to_string();
                }
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        SpectralOperator h = rnd.spectral_operator(rnd.family());
        if (rnd.coin()) h = SpectralOperator(Scalar{}, h.lambda(), h.family());
        check(h);
    }
    for (const auto& h : in.operators) check(h);
    return std::move(t).result();
}

inline SuiteResult isometry(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("isometry op_norm = spectral_norm = matrix norm");
    auto check = [&](const SpectralOperator& h) {
        t.run([&] {
            const NormValue a = op_norm(h), b = spectral_norm(h);
            const NormValue c = operator_norm(to_matrix(h, detail::sufficient_dim(h.lambda(), h.family()), o.precision));
            if (!(a == b) || !(b == c))
                return "norms " + a.to_string() + ", " + b.to_string() + ", " + c.to_string() + " differ for " + h.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.spectral_operator(rnd.family(), c % 2 == 1));
    for (const auto& h : in.operators) check(h);
    return std::move(t).result();
}

inline SuiteResult power_multiplicativity(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("power multiplicativity");
    auto check = [&](const SpectralOperator& h) {
        t.run([&] {
            const NormValue n = op_norm(h);
            NormValue expect = n;
            for (unsigned k = 2; k <= 5; ++k) {
                expect = expect * n;
                if (!(op_norm(power(h, k)) == expect))
                    return "||H^" + std::to_string(k) + "|| = " + op_norm(power(h, k)).to_string() + " for " + h.to_string();
            }
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.spectral_operator(rnd.family(), c % 2 == 1));
    for (const auto& h : in.operators) check(h);
    return std::move(t).result();
}

inline std::vector<NStarPoint> probe_points(const Vector& a, const Vector& b) {
    std::vector<NStarPoint> pts{NStarPoint::infinity()};
    const std::size_t top = std::max(a.max_index(), b.max_index()) + 1;
    for (std::size_t n = 1; n <= top; ++n) pts.push_back(NStarPoint::at(n));
    return pts;
}

inline SuiteResult gelfand_homomorphism(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("Gelfand transform is a unital homomorphism");
    auto check = [&](const SpectralOperator& h1, const SpectralOperator& h2) {
        t.run([&] {
            const NStarFunction g1 = gelfand_transform(h1), g2 = gelfand_transform(h2);
            const NStarFunction gm = gelfand_transform(h1 * h2), ga = gelfand_transform(h1 + h2);
            for (const auto& p : probe_points(h1.lambda(), h2.lambda())) {
                if (!(gm(p) == g1(p) * g2(p))) return "G(H1 H2) != G(H1) G(H2) at " + p.to_string() + " for " + h1.to_string() + " and " + h2.to_string();
                if (!(ga(p) == g1(p) + g2(p))) return "G(H1 + H2) != G(H1) + G(H2) at " + p.to_string();
            }
            if (!(gelfand_transform(SpectralOperator::identity(h1.family())) == NStarFunction::constant(Scalar(1))))
                return std::string("G(Id) is not the constant 1");
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        FamilyPtr fam = rnd.family();
        check(rnd.spectral_operator(fam), rnd.spectral_operator(fam, rnd.coin()));
    }
    for (const auto& h : in.operators) check(h, rnd.spectral_operator(h.family()));
    return std::move(t).result();
}

inline SuiteResult gelfand_roundtrip(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("Gelfand roundtrip");
    auto check_h = [&](const SpectralOperator& h) {
        t.run([&] {
            if (!(inverse_gelfand(gelfand_transform(h), h.family()) == h)) return "inverse(G(H)) != H for " + h.to_string();
            return ok();
        });
    };
    auto check_f = [&](const NStarFunction& f) {
        t.run([&] {
            if (!(gelfand_transform(inverse_gelfand(f)) == f)) return std::string("G(inverse(f)) != f");
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        check_h(rnd.spectral_operator(rnd.family(), rnd.coin()));
        check_f(rnd.nstar_function());
    }
    for (const auto& h : in.operators) check_h(h);
    for (const auto& f : in.functions) check_f(f);
    return std::move(t).result();
}

inline SuiteResult measure_laws(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("spectral measure laws");
    auto check = [&](const FamilyPtr& fam, const Clopen& a, const Clopen& b) {
        t.run([&] {
            const Clopen b_out = difference(b, a);
            if (!(measure(unite(a, b_out), fam) == measure(a, fam) + measure(b_out, fam)))
                return "m(A u B) != m(A) + m(B) for A=" + a.to_string() + ", B=" + b_out.to_string();
            if (!(measure(intersect(a, b), fam) == measure(a, fam) * measure(b, fam)))
                return "m(A n B) != m(A) m(B) for A=" + a.to_string() + ", B=" + b.to_string();
            const SpectralOperator ma = measure(a, fam);
            if (!(ma * ma == ma)) return "m(C)^2 != m(C) for C=" + a.to_string();
            const std::string w = detail::normal_projection_witness(to_matrix(ma, detail::sufficient_dim(ma.lambda(), fam)));
            if (!w.empty()) return "m(" + a.to_string() + "): " + w;
            const NormValue expect = a.is_empty() ? NormValue::zero_norm() : NormValue::of_valuation(0);
            if (!(op_norm(ma) == expect)) return "||m(C)|| = " + op_norm(ma).to_string() + " for C=" + a.to_string();
            return ok();
        });
    };
    auto fits = [](const FamilyPtr& fam, const Clopen& c) { return c.max_index() == 0 || fam->covers(c.max_index()); };
    for (std::size_t c = 0; c < o.cases; ++c) {
        FamilyPtr fam = rnd.family(4, false);
        const std::size_t span = rnd.family_span(fam, 6);
        check(fam, rnd.clopen(span), rnd.clopen(span));
    }
    for (const auto& c : in.clopens) {
        FamilyPtr fam = OrthonormalFamily::canonical();
        if (fits(fam, c)) check(fam, c, rnd.clopen());
    }
    return std::move(t).result();
}

inline SuiteResult shrinking_nets(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("decreasing clopen chains");
    auto check = [&](const Clopen& c) {
        t.run([&] {
            Clopen prev = c;
            const std::size_t top = c.max_index() + 1;
            for (std::size_t k = 1; k <= top; ++k) {
                std::set<std::size_t> head;
                for (std::size_t i = 1; i <= k; ++i) head.insert(i);
                const Clopen next = difference(c, Clopen::finite(head));
                if (!(intersect(next, prev) == next)) return "chain is not decreasing at step " + std::to_string(k) + " from " + c.to_string();
                prev = next;
            }
            // The intersection of the chain is C n {inf}: empty iff C is finite.
            if (c.is_finite()) {
                if (!prev.is_empty()) return "finite chain from " + c.to_string() + " does not reach the empty set";
                if (!(measure(prev) == SpectralOperator::zero())) return std::string("measure of the empty tail is not theta");
            } else if (!prev.contains(NStarPoint::infinity()) || !(op_norm(measure(prev)) == NormValue::of_valuation(0))) {
                return "cofinite chain from " + c.to_string() + " lost the point at infinity";
            }
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.clopen());
    for (const auto& c : in.clopens) check(c);
    return std::move(t).result();
}

inline SuiteResult integration_convergence(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("Riemann sums converge to the integral");
    auto check = [&](const NStarFunction& f, const Clopen& c) {
        t.run([&] {
            const SpectralOperator exact = integrate(f, c);
            NormValue last = NormValue::of_twice_valuation(-1'000'000);
            const auto chain = refinement_chain(f, c);
            for (std::size_t k = 0; k < chain.size(); ++k) {
                const NormValue err = op_norm(riemann_sum(f, chain[k]) - exact);
                if (err < last) return "error valuation decreased at step " + std::to_string(k) + " on " + c.to_string();
                last = err;
            }
            if (!chain.empty() && !last.is_zero_norm()) return "final Riemann sum is not exact on " + c.to_string();
            if (!(integrate(NStarFunction::constant(Scalar(1)), c) == measure(c)))
                return "integral of eta_C != m(C) for C=" + c.to_string();
            if (!(integrate(indicator(c), Clopen::whole()) == measure(c)))
                return "integral of eta_C over N* != m(C) for C=" + c.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.nstar_function(), rnd.clopen());
    for (const auto& f : in.functions) check(f, Clopen::whole());
    for (const auto& c : in.clopens) check(rnd.nstar_function(), c);
    return std::move(t).result();
}

inline SuiteResult scalar_measures(RandomObjects& rnd, const VerifyInputs&, const VerifyOptions& o) {
    Tally t("scalar measures m_{x,y}");
    for (std::size_t c = 0; c < o.cases; ++c) {
        const ScalarMeasureView view(rnd.vector(5), rnd.vector(5));
        const Clopen a = rnd.clopen(), b = difference(rnd.clopen(), a);
        t.run([&] {
            if (!(view.value(unite(a, b)) == view.value(a) + view.value(b))) return "m_xy is not additive on " + a.to_string() + ", " + b.to_string();
            if (!(view.value(Clopen::whole()) == inner_product(view.x(), view.y()))) return std::string("m_xy(N*) != <x,y>");
            if (!(view.integrate(indicator(a)) == view.value(a))) return "int eta_C dm_xy != m_xy(C) for C=" + a.to_string();
            return ok();
        });
    }
    return std::move(t).result();
}

inline SuiteResult matrix_representation(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("matrix representation isometry");
    auto check = [&](const NStarFunction& f, const NStarFunction& g, const FamilyPtr& fam) {
        t.run([&] {
            const std::size_t n = std::max(detail::sufficient_dim(f.deviations(), fam), detail::sufficient_dim(g.deviations(), fam));
            const MatrixRep rf = matrix_rep(f, fam, n, o.precision);
            if (!(rf.entries == to_matrix(inverse_gelfand(f, fam), n, o.precision))) return std::string("matrix_rep != to_matrix(inverse_gelfand(f))");
            if (!(rf.norm() == f.sup_norm())) return "||A(f)|| = " + rf.norm().to_string() + " but ||f|| = " + f.sup_norm().to_string();
            const NStarFunction sum = gelfand_transform(inverse_gelfand(f, fam) + inverse_gelfand(g, fam));
            if (!(matrix_rep(sum, fam, n, o.precision).entries == rf.entries + matrix_rep(g, fam, n, o.precision).entries))
                return std::string("matrix_rep is not additive");
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        FamilyPtr fam = rnd.family(4, false);
        const std::size_t span = rnd.family_span(fam, 5);
        check(rnd.nstar_function(span), rnd.nstar_function(span), fam);
    }
    for (const auto& f : in.functions) check(f, rnd.nstar_function(), OrthonormalFamily::canonical());
    return std::move(t).result();
}

inline SuiteResult resolvent_identities(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("resolvent identities and spectral points");
    const int p = o.precision;
    auto check = [&](const Vector& lambda, const FamilyPtr& fam, const Scalar& z) {
        t.run([&] {
            const Spectrum s = spectrum_of(lambda);
            if (z.is_exact_zero() || s.contains(z)) {
                try {
                    resolvent(z, lambda, fam, p);
                } catch (const error& e) {
                    if (e.code() == errc::spectral_point) return ok();
                    throw;
                }
                return "no SpectralPoint for z=" + z.to_string() + " in the spectrum";
            }
            const SpectralOperator r = resolvent(z, lambda, fam, p);
            const std::size_t n = detail::sufficient_dim(lambda, fam);
            const MatrixOperator shifted = to_matrix(SpectralOperator(z, Scalar(-1) * lambda, fam), n, p);
            const MatrixOperator rm = to_matrix(r, n, p);
            const MatrixOperator id = MatrixOperator::identity(n);
            if (!detail::matrix_congruent(compose(shifted, rm), id, p)) return "(z - T) R != Id mod t^P for z=" + z.to_string() + ", lambda=" + lambda.to_string();
            if (!detail::matrix_congruent(compose(rm, shifted), id, p)) return "R (z - T) != Id mod t^P for z=" + z.to_string() + ", lambda=" + lambda.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) {
        FamilyPtr fam = rnd.family(4, false);
        const Vector lambda = rnd.vector(rnd.family_span(fam, 5), 0.7, -1, 3);
        Scalar z = rnd.scalar(-1, 3);
        if (c % 3 == 2 && !lambda.is_zero()) z = lambda.entries().begin()->second;
        check(lambda, fam, z);
    }
    for (const auto& l : in.lambdas) {
        check(l, OrthonormalFamily::canonical(), rnd.scalar(-1, 3));
        if (!l.is_zero()) check(l, OrthonormalFamily::canonical(), l.entries().rbegin()->second);
    }
    return std::move(t).result();
}

inline ValueTable random_table(RandomObjects& rnd, const Spectrum& s) {
    ValueTable f{rnd.scalar_or_zero(0.3, -1, 3), {}};
    for (const auto& c : s.classes) f.values.emplace_back(c.value, rnd.scalar_or_zero(0.3, -1, 3));
    return f;
}

inline SuiteResult sigma_isometry(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("functional calculus isometry on sigma");
    auto check = [&](const Vector& lambda) {
        t.run([&] {
            const ValueTable f = random_table(rnd, spectrum_of(lambda));
            const SpectralOperator h = sigma_integrate(f, lambda);
            if (!(op_norm(h) == detail::table_norm(f))) return "||int f dm|| = " + op_norm(h).to_string() + " != ||f|| for lambda=" + lambda.to_string();
            const MembershipResult m = membership(h, lambda);
            if (!m.member) return "int f dm is not in L_T for lambda=" + lambda.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.lambda_with_classes(static_cast<std::size_t>(rnd.uniform(1, 4)), 6));
    for (const auto& l : in.lambdas) check(l);
    return std::move(t).result();
}

inline SuiteResult idempotent_enumeration(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("idempotents of L_T are the class sums");
    auto check = [&](const Vector& lambda) {
        t.run([&] {
            const std::size_t m = lambda.max_index();
            std::set<std::string> predicted, found;
            for (const auto& e : predicted_idempotents(lambda)) predicted.insert(e.as_operator.to_string());
            std::size_t total = 2;
            for (std::size_t i = 0; i < m; ++i) total *= 3;
            for (std::size_t code = 0; code < total; ++code) {
                std::size_t rest = code;
                const Scalar alpha(static_cast<long>(rest % 2));
                rest /= 2;
                Vector mu;
                for (std::size_t i = 1; i <= m; ++i, rest /= 3) mu.set(i, Scalar(static_cast<long>(rest % 3) - 1));
                const SpectralOperator h(alpha, mu);
                const bool idem = h * h == h;
                bool classified = true;
                try {
                    classify_idempotent(h);
                } catch (const error& e) {
                    if (e.code() != errc::not_idempotent) throw;
                    classified = false;
                }
                if (idem != classified) return "classify_idempotent disagrees with H^2 = H on " + h.to_string();
                if (idem && membership(h, lambda).member) found.insert(h.to_string());
            }
            if (found != predicted)
                return "found " + std::to_string(found.size()) + " idempotents, predicted " + std::to_string(predicted.size()) + " for lambda=" + lambda.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.lambda_with_classes(static_cast<std::size_t>(rnd.uniform(1, 4)), static_cast<std::size_t>(rnd.uniform(4, 5))));
    for (const auto& l : in.lambdas)
        if (l.max_index() <= 6) check(l);
    return std::move(t).result();
}

inline SuiteResult sigma_measure_laws(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("spectral measure of T_lambda");
    auto check = [&](const Vector& lambda) {
        t.run([&] {
            const Spectrum s = spectrum_of(lambda);
            const SigmaClopen a = detail::random_sigma_clopen(rnd, s), b = detail::random_sigma_clopen(rnd, s);
            auto m = [&](const SigmaClopen& c) { return sigma_measure(c, lambda).as_operator; };
            if (!(m(intersect(a, b)) == m(a) * m(b))) return "E(A n B) != E(A) E(B) for lambda=" + lambda.to_string();
            const SigmaClopen b_out = intersect(b, complement(a));
            if (!(m(unite(a, b_out)) == m(a) + m(b_out))) return "E(A u B) != E(A) + E(B) for lambda=" + lambda.to_string();
            const std::size_t n = lambda.max_index() + 1;
            const std::string w = detail::normal_projection_witness(to_matrix(m(a), n));
            if (!w.empty()) return w;
            for (std::size_t i = 0; i < s.classes.size(); ++i) {
                const MatrixOperator ei = to_matrix(m(SigmaClopen::finite({s.classes[i].value})), n);
                if (!(hs_inner(ei, ei).valuation() == NormValue::of_valuation(0))) return std::string("class projection does not have HS norm 1");
                for (std::size_t j = 0; j < i; ++j)
                    if (!hs_inner(ei, to_matrix(m(SigmaClopen::finite({s.classes[j].value})), n)).is_exact_zero())
                        return "class projections are not HS-orthogonal for lambda=" + lambda.to_string();
            }
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.lambda_with_classes(static_cast<std::size_t>(rnd.uniform(1, 4)), 6));
    for (const auto& l : in.lambdas) check(l);
    return std::move(t).result();
}

inline SuiteResult eigendecompose_roundtrip(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("eigendecompose roundtrip");
    auto check = [&](const MatrixOperator& m) {
        t.run([&] {
            const SpectralOperator h = eigendecompose(m);
            if (!(to_matrix(h, m.dim()) == m)) return "to_matrix(eigendecompose(T)) != T for\n" + m.to_string();
            if (!(adjoint(m) == m)) return "T is not self-adjoint:\n" + m.to_string();
            if (!(operator_norm(m) == op_norm(h))) return "||T|| != ||lambda|| for\n" + m.to_string();
            if (!certify_class(m, OperatorClass::compact).finite_check) return "compact certificate fails for\n" + m.to_string();
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(detail::symmetric_with_rational_spectrum(rnd, static_cast<std::size_t>(rnd.uniform(1, 4))));
    for (const auto& m : in.matrices) {
        if (!m.is_symmetric()) continue;
        try {
            eigendecompose(m);
        } catch (const error&) {
            continue; // only matrices with a rational spectrum have a roundtrip
        }
        check(m);
    }
    return std::move(t).result();
}

inline SuiteResult class_sum_atomicity(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("class sums are atomic in L_T");
    auto check = [&](const Vector& lambda) {
        t.run([&] {
            for (const auto& cls : spectrum_of(lambda).classes) {
                Vector sum;
                for (auto n : cls.indices) sum.set(n, Scalar(1));
                if (!membership(SpectralOperator(Scalar{}, sum), lambda).member) return "class sum over " + cls.value.to_string() + " is not a member";
                if (cls.indices.size() < 2) continue;
                for (auto n : cls.indices)
                    if (membership(SpectralOperator::projection(n), lambda).member)
                        return "P" + std::to_string(n) + " is a member though its class has " + std::to_string(cls.indices.size()) + " indices";
            }
            return ok();
        });
    };
    for (std::size_t c = 0; c < o.cases; ++c) check(rnd.lambda_with_classes(static_cast<std::size_t>(rnd.uniform(1, 3)), 6));
    for (const auto& l : in.lambdas) check(l);
    return std::move(t).result();
}

inline SuiteResult serialization_roundtrip(RandomObjects& rnd, const VerifyInputs& in, const VerifyOptions& o) {
    Tally t("serialization roundtrip");
    auto reparse = [](const io::json& j) { return io::parse_document(j.dump()); };
    for (std::size_t c = 0; c < o.cases; ++c) {
        Scalar s = rnd.scalar();
        if (rnd.coin(0.3)) s = s.truncated(rnd.uniform(-1, 5));
        const SpectralOperator h = rnd.spectral_operator(rnd.family(), rnd.coin());
        const NStarFunction f = rnd.nstar_function();
        const Clopen cl = rnd.clopen();
        t.run([&] {
            if (!(io::scalar_from_json(reparse(io::to_json(s))) == s)) return "scalar " + s.to_string() + " does not roundtrip";
            if (!(io::operator_from_json(reparse(io::to_json(h))) == h)) return "operator " + h.to_string() + " does not roundtrip";
            if (!(io::function_from_json(reparse(io::to_json(f))) == f)) return std::string("function does not roundtrip");
            if (!(io::clopen_from_json(reparse(io::to_json(cl))) == cl)) return "clopen " + cl.to_string() + " does not roundtrip";
            return ok();
        });
    }
    for (const auto& s : in.scalars)
        t.run([&] { return io::scalar_from_json(reparse(io::to_json(s))) == s ? ok() : "scalar " + s.to_string() + " does not roundtrip"; });
    return std::move(t).result();
}

} // namespace suites

using SuiteFn = SuiteResult (*)(RandomObjects&, const VerifyInputs&, const VerifyOptions&);

inline const std::vector<SuiteFn>& suite_catalogue() {
    static const std::vector<SuiteFn> all{
        suites::scalar_ultrametric,      suites::formal_reality,         suites::scalar_inverse,
        suites::norm_coincidence,        suites::cauchy_schwarz,         suites::gram_schmidt_suite,
        suites::projection,              suites::norm_formulas,          suites::hs_inner_suite,
        suites::adjoint_suite,           suites::spectral_matrix,        suites::isometry,
        suites::power_multiplicativity,  suites::gelfand_homomorphism,   suites::gelfand_roundtrip,
        suites::measure_laws,            suites::shrinking_nets,         suites::integration_convergence,
        suites::scalar_measures,         suites::matrix_representation,  suites::resolvent_identities,
        suites::sigma_isometry,          suites::idempotent_enumeration, suites::sigma_measure_laws,
        suites::eigendecompose_roundtrip, suites::class_sum_atomicity,   suites::serialization_roundtrip,
    };
    return all;
}

/// Every suite gets its own generator (seed + position) so suites are independent.
inline std::vector<SuiteResult> run_verify(const VerifyInputs& in = {}, const VerifyOptions& o = {}) {
    std::vector<SuiteResult> out;
    const auto& all = suite_catalogue();
    for (std::size_t i = 0; i < all.size(); ++i) {
        RandomObjects rnd(o.seed + i);
        out.push_back(all[i](rnd, in, o));
    }
    return out;
}

} // namespace ultraspec
