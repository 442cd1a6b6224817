#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "ultraspec/gelfand.hpp"

using namespace ultraspec;

namespace {

Scalar s(const char* text) { return parse_scalar(text); }

FamilyPtr plus_minus() { return OrthonormalFamily::from_members({Vector{Scalar(1), Scalar(1)}, Vector{Scalar(1), Scalar(-1)}}); }

SpectralOperator op(Scalar alpha, Vector lambda, FamilyPtr f = OrthonormalFamily::canonical()) {
    return {std::move(alpha), std::move(lambda), std::move(f)};
}

} // namespace

TEST(AlgOp, IdentityIsUnit) {
    const SpectralOperator h = op(s("t"), Vector{Scalar(2), s("t^-1")});
    EXPECT_EQ(SpectralOperator::identity() * h, h);
    EXPECT_EQ(h * SpectralOperator::identity(), h);
}

TEST(AlgOp, ProjectionProducts) {
    const auto p1 = SpectralOperator::projection(1);
    const auto p2 = SpectralOperator::projection(2);
    EXPECT_EQ(p1 * p2, SpectralOperator::zero());
    EXPECT_EQ(p1 * p1, p1);
}

TEST(AlgOp, MixedProduct) {
    // (1 + P1)(2 + t P2) = 2 Id + 2 P1 + t P2
    const auto a = op(Scalar(1), Vector{Scalar(1)});
    const auto b = op(Scalar(2), Vector{Scalar{}, Scalar::t()});
    EXPECT_EQ(a * b, op(Scalar(2), Vector{Scalar(2), Scalar::t()}));
    EXPECT_EQ(a + b, op(Scalar(3), Vector{Scalar(1), Scalar::t()}));
}

TEST(AlgOp, FamilyMismatch) {
    try {
        (void)(SpectralOperator::projection(1) * SpectralOperator::projection(1, plus_minus()));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::family_mismatch);
    }
}

TEST(OpNorm, Examples) {
    EXPECT_EQ(op_norm(op(Scalar(1), Vector{Scalar::t()})), NormValue::of_valuation(0));
    EXPECT_EQ(op_norm(op(Scalar{}, Vector{Scalar::t(), Scalar::t(2)})), NormValue::of_valuation(1));
    EXPECT_EQ(op_norm(op(Scalar::t(2), Vector{Scalar::t()})), NormValue::of_valuation(1));
    EXPECT_TRUE(op_norm(SpectralOperator::zero()).is_zero_norm());
}

TEST(OpNorm, CancellationInCharacterDoesNotLowerNorm) {
    // alpha + lambda_1 = 0 yet the norm is max(|alpha|, |lambda|)
    const auto h = op(Scalar(1), Vector{Scalar(-1)});
    EXPECT_EQ(op_norm(h), NormValue::of_valuation(0));
    EXPECT_EQ(op_norm(h), spectral_norm(h));
}

TEST(Power, Examples) {
    EXPECT_EQ(power(op(Scalar{}, Vector{Scalar::t()}), 2), op(Scalar{}, Vector{Scalar::t(2)}));
    const auto idem = op(Scalar(1), Vector{Scalar(-1)});
    for (unsigned n = 1; n <= 5; ++n) EXPECT_EQ(power(idem, n), idem);
}

TEST(Power, NormIsMultiplicative) {
    const auto h = op(s("t^-1 + 1"), Vector{s("t^2"), s("-t^-1")});
    for (unsigned n = 2; n <= 5; ++n)
        EXPECT_EQ(op_norm(power(h, n)), NormValue::of_valuation(-static_cast<long>(n))) << n;
}

TEST(ToMatrix, Projection) {
    EXPECT_EQ(to_matrix(SpectralOperator::projection(1), 2), MatrixOperator::diagonal({Scalar(1), Scalar{}}));
    EXPECT_EQ(to_matrix(SpectralOperator::identity(), 3), MatrixOperator::identity(3));
}

TEST(ToMatrix, PlusMinusFamily) {
    // mu P_1 with y_1 = (1,1): mu/2 [[1,1],[1,1]]
    const auto h = op(Scalar{}, Vector{Scalar::t()}, plus_minus());
    const Scalar half = Scalar(Rational(1, 2)) * Scalar::t();
    EXPECT_EQ(to_matrix(h, 2), MatrixOperator::from_rows({{half, half}, {half, half}}));
}

TEST(ToMatrix, AgreesWithOracle) {
    const auto fam = plus_minus();
    const auto h = op(s("2 + t"), Vector{s("t^-1"), Scalar(3)}, fam);
    EXPECT_EQ(to_matrix(h, 3), oracle::materialize(h, 3));
}

TEST(ToMatrix, DimensionTooSmall) {
    try {
        to_matrix(SpectralOperator::projection(4), 3);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::dimension_too_small);
    }
}

TEST(Gelfand, Transforms) {
    const NStarFunction one = gelfand_transform(SpectralOperator::identity());
    EXPECT_EQ(one(NStarPoint::infinity()), Scalar(1));
    EXPECT_EQ(one(7), Scalar(1));

    const NStarFunction eta = gelfand_transform(SpectralOperator::projection(1));
    EXPECT_EQ(eta(1), Scalar(1));
    EXPECT_EQ(eta(2), Scalar{});
    EXPECT_EQ(eta(NStarPoint::infinity()), Scalar{});

    const NStarFunction g = gelfand_transform(op(Scalar(1), Vector{Scalar::t()}));
    EXPECT_EQ(g(1), s("1 + t"));
    EXPECT_EQ(g(2), Scalar(1));
    EXPECT_EQ(g(NStarPoint::infinity()), Scalar(1));
}

TEST(Gelfand, InverseExamples) {
    EXPECT_EQ(inverse_gelfand(NStarFunction(Scalar(1), Vector{})), SpectralOperator::identity());
    EXPECT_EQ(inverse_gelfand(NStarFunction(Scalar{}, Vector::unit(3))), SpectralOperator::projection(3));
    // eta of N* \ {1}
    EXPECT_EQ(inverse_gelfand(NStarFunction(Scalar(1), Vector{Scalar(-1)})), op(Scalar(1), Vector{Scalar(-1)}));
}

TEST(Gelfand, RoundTrip) {
    const auto h = op(s("t^-2"), Vector{Scalar{}, s("1 + O(t^3)"), Scalar(5)}, OrthonormalFamily::canonical());
    EXPECT_EQ(inverse_gelfand(gelfand_transform(h)), h);
}

TEST(Gelfand, InverseChecksFamilySize) {
    try {
        inverse_gelfand(NStarFunction(Scalar{}, Vector::unit(3)), plus_minus());
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::family_too_small);
    }
}

TEST(Character, InfinityIsAlpha) {
    const auto h = op(Scalar(4), Vector{Scalar::t()});
    EXPECT_EQ(character(h, NStarPoint::infinity()), Scalar(4));
    EXPECT_EQ(character(h, NStarPoint::at(1)), s("4 + t"));
}

TEST(SpectralNorm, Examples) {
    EXPECT_EQ(spectral_norm(SpectralOperator::identity()), NormValue::of_valuation(0));
    EXPECT_EQ(spectral_norm(op(Scalar{}, Vector{Scalar::t(), Scalar::t(2)})), NormValue::of_valuation(1));
    EXPECT_TRUE(spectral_norm(SpectralOperator::zero()).is_zero_norm());
}

TEST(Eigendecompose, Swap) {
    const auto m = MatrixOperator::from_rows({{Scalar{}, Scalar(1)}, {Scalar(1), Scalar{}}});
    const SpectralOperator h = eigendecompose(m);
    EXPECT_EQ(h.lambda(), (Vector{Scalar(1), Scalar(-1)}));
    ASSERT_EQ(h.family()->members().size(), 2u);
    EXPECT_EQ(h.family()->member(1), (Vector{Scalar(1), Scalar(1)}));
    EXPECT_EQ(h.family()->member(2), (Vector{Scalar(1), Scalar(-1)}));
    EXPECT_EQ(to_matrix(h, 2), m);
}

TEST(Eigendecompose, DiagonalUsesCanonicalBasis) {
    const SpectralOperator h = eigendecompose(MatrixOperator::diagonal({Scalar::t(), Scalar::t(2)}));
    EXPECT_TRUE(h.family()->is_canonical());
    EXPECT_EQ(h.lambda(), (Vector{Scalar::t(), Scalar::t(2)}));
}

TEST(Eigendecompose, EigenEquationAgainstOracle) {
    // eigenvalues 4, 1, 1
    const auto m = MatrixOperator::from_rows({{Scalar(2), Scalar(1), Scalar(1)},
                                              {Scalar(1), Scalar(2), Scalar(1)},
                                              {Scalar(1), Scalar(1), Scalar(2)}});
    const SpectralOperator h = eigendecompose(m);
    EXPECT_EQ(oracle::materialize(h, 3), m);
    for (const auto& [k, lam] : h.lambda().entries()) {
        const Vector y = h.family()->member(k);
        EXPECT_EQ(apply(m, y), lam * y) << k;
    }
}

TEST(Eigendecompose, Errors) {
    auto code = [](const MatrixOperator& m) {
        try {
            eigendecompose(m);
        } catch (const error& e) {
            return e.code();
        }
        return errc::parse_error;
    };
    EXPECT_EQ(code(MatrixOperator::from_rows({{Scalar{}, Scalar(1)}, {Scalar{}, Scalar{}}})), errc::non_symmetric);
    EXPECT_EQ(code(MatrixOperator::from_rows({{Scalar{}, Scalar(1)}, {Scalar(1), Scalar(1)}})), errc::irrational_spectrum);
    EXPECT_EQ(code(MatrixOperator::from_rows({{Scalar{}, Scalar::t()}, {Scalar::t(), Scalar{}}})), errc::irrational_spectrum);
}
