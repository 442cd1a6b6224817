// acceptance CLI TESTS_DIR SCRATCH
// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <string>

#include "support/golden.hpp"
#include "support/oracles.hpp"
#include "ultraspec/cli.hpp"
#include "ultraspec/random.hpp"
#include "ultraspec/verify.hpp"

using namespace ultraspec;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string witness;

    void check(bool ok, const std::function<std::string()>& why) {
        ++cases;
        if (ok) return;
        if (failures++ == 0) witness = why();
    }

    void guard(const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            check(false, [&] { return std::string("unexpected exception: ") + e.what(); });
        }
    }
};

bool all_passed = true;

void report(int id, const std::string& title, const Criterion& c, double seconds, double limit = 0) {
    const bool timed_out = limit > 0 && seconds >= limit;
    const bool pass = c.failures == 0 && c.cases > 0 && !timed_out;
    all_passed = all_passed && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << id << ". " << title << ": " << c.cases << " checks, " << c.failures
              << " failures, " << std::fixed;
    std::cout.precision(3);
    std::cout << seconds << " s";
    if (limit > 0) std::cout << " (limit " << limit << " s)";
    if (c.failures) std::cout << "; first: " << c.witness;
    std::cout << '\n';
}

template <class F>
double timed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::size_t matrix_dim(const SpectralOperator& h) { return detail::sufficient_dim(h.lambda(), h.family()); }

std::vector<SpectralOperator> operators_for_norms(RandomObjects& rnd) {
    std::vector<SpectralOperator> ops;
    for (std::size_t i = 0; i < 100; ++i) ops.push_back(rnd.spectral_operator(rnd.family(), i % 2 == 1));
    return ops;
}

bool disjoint(const Clopen& a, const Clopen& b) { return intersect(a, b).is_empty(); }

} // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: acceptance CLI TESTS_DIR SCRATCH\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path tests = argv[2];
    const fs::path scratch = argv[3];
    const std::uint64_t seed = seed_from_env();
    const int P = kDefaultPrecision;
    std::cout << "seed " << seed << '\n';

    {
        Criterion c;
        RandomObjects rnd(seed + 1);
        const double s = timed([&] {
            for (int i = 0; i < 200; ++i) {
                const Vector x = rnd.nonzero_vector(static_cast<std::size_t>(rnd.uniform(1, 8)));
                c.guard([&] {
                    const Scalar xx = inner_product(x, x);
                    const long lhs = *oracle::lowest_exponent(xx);
                    const long rhs = *oracle::lowest_exponent(x.dense(x.max_index()));
                    c.check(lhs == 2 * rhs && xx.valuation() == NormValue::of_valuation(2 * rhs) &&
                                sup_norm(x) == NormValue::of_valuation(rhs),
                            [&] { return "x=" + x.to_string(); });
                });
            }
        });
        report(1, "norm coincidence v(<x,x>) = 2 v(x)", c, s, 5.0);
    }

    RandomObjects op_rnd(seed + 2);
    const std::vector<SpectralOperator> ops = operators_for_norms(op_rnd);
    {
        Criterion c;
        const double s = timed([&] {
            for (const auto& h : ops)
                c.guard([&] {
                    const NormValue a = op_norm(h);
                    const NormValue b = operator_norm(to_matrix(h, matrix_dim(h), P));
                    const NormValue d = spectral_norm(h);
                    c.check(a == b && b == d, [&] {
                        return h.to_string() + ": " + a.to_string() + ", " + b.to_string() + ", " + d.to_string();
                    });
                });
        });
        report(2, "isometry op_norm = matrix operator norm = spectral norm", c, s, 10.0);
    }

    {
        Criterion c;
        const double s = timed([&] {
            for (const auto& h : ops)
                for (unsigned n = 2; n <= 5; ++n)
                    c.guard([&] {
                        const NormValue base = op_norm(h);
                        const NormValue pw = op_norm(power(h, n));
                        const bool ok = base.is_zero_norm()
                                            ? pw.is_zero_norm()
                                            : !pw.is_zero_norm() &&
                                                  pw.twice_valuation() == static_cast<long>(n) * base.twice_valuation();
                        c.check(ok, [&] { return h.to_string() + " n=" + std::to_string(n); });
                    });
        });
        report(3, "power multiplicativity n = 2..5", c, s);
    }

    {
        Criterion c;
        RandomObjects rnd(seed + 4);
        const double s = timed([&] {
            for (int i = 0; i < 100; ++i) {
                const FamilyPtr fam = rnd.family();
                const SpectralOperator a = rnd.spectral_operator(fam), b = rnd.spectral_operator(fam);
                c.guard([&] {
                    const NStarFunction ga = gelfand_transform(a), gb = gelfand_transform(b);
                    const NStarFunction gab = gelfand_transform(a * b), gsum = gelfand_transform(a + b);
                    std::set<std::size_t> pts;
                    for (const auto& [n, _] : a.lambda().entries()) pts.insert(n);
                    for (const auto& [n, _] : b.lambda().entries()) pts.insert(n);
                    pts.insert(pts.empty() ? 1 : *pts.rbegin() + 1);
                    bool ok = gab(NStarPoint::infinity()) == ga(NStarPoint::infinity()) * gb(NStarPoint::infinity()) &&
                              gsum(NStarPoint::infinity()) == ga(NStarPoint::infinity()) + gb(NStarPoint::infinity());
                    for (auto n : pts) ok = ok && gab(n) == ga(n) * gb(n) && gsum(n) == ga(n) + gb(n);
                    ok = ok && gelfand_transform(SpectralOperator::identity(fam))(NStarPoint::infinity()) == Scalar(1);
                    ok = ok && inverse_gelfand(ga, fam) == a && inverse_gelfand(gb, fam) == b;
                    c.check(ok, [&] { return a.to_string() + " , " + b.to_string(); });
                });
            }
        });
        report(4, "Gelfand homomorphism and roundtrip", c, s);
    }

    {
        Criterion c;
        RandomObjects rnd(seed + 5);
        const double s = timed([&] {
            for (int i = 0; i < 200; ++i) {
                Clopen a = rnd.clopen(), b = rnd.clopen();
                b = difference(b, a);
                c.guard([&] {
                    c.check(disjoint(a, b) && measure(unite(a, b)) == measure(a) + measure(b),
                            [&] { return "additivity " + a.to_string() + " " + b.to_string(); });
                });
            }
            for (int i = 0; i < 200; ++i) {
                const Clopen a = rnd.clopen(), b = rnd.clopen();
                c.guard([&] {
                    c.check(measure(intersect(a, b)) == measure(a) * measure(b),
                            [&] { return "multiplicativity " + a.to_string() + " " + b.to_string(); });
                });
            }
            for (int i = 0; i < 100; ++i) {
                const Clopen a = rnd.clopen();
                c.guard([&] {
                    const SpectralOperator m = measure(a);
                    const std::size_t n = a.max_index() + 2;
                    const MatrixOperator pm = to_matrix(m, n);
                    bool ok = m * m == m && oracle::multiply(pm, pm) == pm && adjoint(pm) == pm;
                    // normal projection: <x, y> = 0 for x in ker, y in range
                    for (std::size_t i = 1; i <= n && ok; ++i) {
                        const Vector range = apply(pm, Vector::unit(i));
                        for (std::size_t j = 1; j <= n && ok; ++j) {
                            const Vector ker = Vector::unit(j) - apply(pm, Vector::unit(j));
                            ok = inner_product(ker, range).is_exact_zero();
                        }
                    }
                    ok = ok && (a.is_empty() ? op_norm(m).is_zero_norm() : op_norm(m) == NormValue::of_valuation(0));
                    c.check(ok, [&] { return "projection " + a.to_string(); });
                });
            }
        });
        report(5, "spectral measure laws", c, s);
    }

    {
        Criterion c;
        RandomObjects rnd(seed + 6);
        const double s = timed([&] {
            for (int i = 0; i < 50; ++i) {
                const NStarFunction f = rnd.nstar_function();
                const Clopen dom = rnd.coin(0.3) ? Clopen::whole() : rnd.clopen();
                c.guard([&] {
                    const SpectralOperator exact = integrate(f, dom);
                    const auto chain = refinement_chain(f, dom);
                    std::optional<NormValue> prev;
                    bool ok = true;
                    for (const auto& part : chain) {
                        const NormValue err = op_norm(riemann_sum(f, part) - exact);
                        if (prev && err < *prev) ok = false;
                        prev = err;
                    }
                    const bool reaches = dom.is_empty() ? exact == SpectralOperator::zero() : prev && prev->is_zero_norm();
                    c.check(ok && reaches, [&] { return "chain on " + dom.to_string(); });
                    c.check(integrate(indicator(dom), Clopen::whole()) == measure(dom),
                            [&] { return "closed form on " + dom.to_string(); });
                });
            }
            for (const Clopen& d : {Clopen::empty(), Clopen::whole(), Clopen::finite({1, 3}), Clopen::cofinite({2})})
                c.guard([&] { c.check(integrate(indicator(d), Clopen::whole()) == measure(d), [&] { return d.to_string(); }); });
        });
        report(6, "integration convergence and closed forms", c, s);
    }

    {
        Criterion c;
        RandomObjects rnd(seed + 7);
        const double s = timed([&] {
            for (int i = 0; i < 100; ++i) {
                const FamilyPtr fam = rnd.family(4, false);
                const NStarFunction f = rnd.nstar_function(fam->is_canonical() ? 5 : *fam->size());
                c.guard([&] {
                    const SpectralOperator h = inverse_gelfand(f, fam);
                    const std::size_t n = matrix_dim(h);
                    const MatrixRep rep = matrix_rep(f, fam, n, P);
                    c.check(rep.entries == to_matrix(h, n, P) && rep.norm() == f.sup_norm(),
                            [&] { return h.to_string(); });
                });
            }
        });
        report(7, "matrix representation", c, s);
    }

    {
        Criterion c;
        RandomObjects rnd(seed + 8);
        const double s = timed([&] {
            for (int i = 0; i < 50; ++i) {
                const std::size_t n = static_cast<std::size_t>(rnd.uniform(1, 5));
                const Vector lambda = rnd.vector(n, 0.8, -1, 3);
                Scalar z = rnd.scalar(-1, 3);
                while (spectrum_of(lambda).contains(z)) z = rnd.scalar(-1, 3);
                c.guard([&] {
                    const SpectralOperator r = resolvent(z, lambda, OrthonormalFamily::canonical(), P);
                    const SpectralOperator shifted(z, Scalar(-1) * lambda);
                    bool ok = true;
                    for (const SpectralOperator& prod : {shifted * r, r * shifted}) {
                        ok = ok && oracle::agree_mod(prod.alpha(), Scalar(1), P);
                        for (std::size_t k = 1; k <= n; ++k) ok = ok && oracle::agree_mod(prod.lambda()[k], Scalar{}, P);
                    }
                    MatrixOperator dense(n + 1);
                    for (std::size_t k = 1; k <= n + 1; ++k) dense.at(k, k) = z - lambda[k];
                    const auto inv = oracle::dense_inverse(dense, P + 40);
                    ok = ok && inv && oracle::agree_mod(to_matrix(r, n + 1, P), *inv, P);
                    c.check(ok, [&] { return "z=" + z.to_string() + " lambda=" + lambda.to_string(); });
                });
            }
            for (int i = 0; i < 50; ++i) {
                const Vector lambda = rnd.nonzero_vector(static_cast<std::size_t>(rnd.uniform(1, 5)), 0.8, -1, 3);
                const auto& entries = lambda.entries();
                auto it = entries.begin();
                std::advance(it, rnd.uniform(0, static_cast<int>(entries.size()) - 1));
                const Scalar z = i % 10 == 0 ? Scalar{} : it->second;
                bool raised = false;
                try {
                    resolvent(z, lambda, OrthonormalFamily::canonical(), P);
                } catch (const error& e) {
                    raised = e.code() == errc::spectral_point;
                }
                c.check(raised, [&] { return "no SpectralPoint at z=" + z.to_string(); });
            }
        });
        report(8, "resolvent identities, dense inverse oracle, spectral points", c, s);
    }

    {
        Criterion c;
        RandomObjects rnd(seed + 9);
        const double s = timed([&] {
            for (std::size_t k = 1; k <= 4; ++k)
                for (int rep = 0; rep < 5; ++rep) {
                    const Vector lambda = rnd.lambda_with_classes(k, static_cast<std::size_t>(rnd.uniform(static_cast<int>(k), 6)));
                    c.guard([&] {
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
                            const MatrixOperator hm = to_matrix(h, m + 1);
                            if (oracle::multiply(hm, hm) == hm && membership(h, lambda).member) found.insert(h.to_string());
                        }
                        const std::size_t classes = spectrum_of(lambda).classes.size();
                        c.check(found == predicted && predicted.size() == 2 * (std::size_t{1} << classes),
                                [&] { return "lambda=" + lambda.to_string() + " found " + std::to_string(found.size()); });
                    });
                }
        });
        report(9, "idempotent classification by exhaustive enumeration", c, s);
    }

    {
        Criterion c;
        RandomObjects rnd(seed + 10);
        const double s = timed([&] {
            for (int i = 0; i < 20; ++i) {
                const std::size_t n = static_cast<std::size_t>(rnd.uniform(2, 5));
                const MatrixOperator m = detail::symmetric_with_rational_spectrum(rnd, n);
                c.guard([&] {
                    const SpectralOperator h = eigendecompose(m);
                    c.check(to_matrix(h, n) == m && oracle::materialize(h, n) == m &&
                                operator_norm(m) == sup_norm(h.lambda()),
                            [&] { return m.to_string(); });
                });
            }
        });
        report(10, "eigendecompose roundtrip", c, s);
    }

    {
        Criterion c;
        fs::create_directories(scratch);
        const double s = timed([&] {
            std::set<std::string> covered;
            for (const auto& gc : golden::load_cases(tests / "golden" / "cases.tsv")) {
                const auto first = golden::run(cli, tests / "specs", gc, scratch);
                const auto second = golden::run(cli, tests / "specs", gc, scratch);
                const auto expected = golden::slurp(golden::golden_path(tests / "golden", gc));
                c.check(first.exit_code == gc.exit_code && first.transcript == second.transcript &&
                            first.transcript == expected,
                        [&] { return gc.name; });
                covered.insert(gc.command);
            }
            for (const auto& cmd : cli::commands())
                c.check(covered.count(cmd) == 1, [&] { return "no golden case for " + cmd; });
        });
        report(11, "CLI golden files and byte-identical reruns", c, s);
    }

    std::cout << (all_passed ? "all criteria passed" : "some criteria FAILED") << '\n';
    return all_passed ? 0 : 1;
}
