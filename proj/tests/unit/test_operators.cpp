#include <gtest/gtest.h>

#include "ultraspec/gelfand.hpp"
#include "ultraspec/operators.hpp"

using namespace ultraspec;

namespace {

Scalar s(const char* text) { return parse_scalar(text); }

MatrixOperator m2(const char* a, const char* b, const char* c, const char* d) {
    return MatrixOperator::from_rows({{s(a), s(b)}, {s(c), s(d)}});
}

} // namespace

TEST(Apply, Identity) {
    const Vector x{Scalar(1), Scalar::t()};
    EXPECT_EQ(apply(MatrixOperator::identity(3), x), x);
}

TEST(Apply, Diagonal) {
    EXPECT_EQ(apply(MatrixOperator::diagonal({Scalar::t(), Scalar::t(2)}), Vector::unit(2)), Vector::unit(2, Scalar::t(2)));
}

TEST(Apply, SumFunctionalTruncated) {
    // T(x) = (x_1 + x_2 + x_3) e_1 on span{e_1, e_2, e_3}
    MatrixOperator m(3);
    for (std::size_t j = 1; j <= 3; ++j) m.at(1, j) = Scalar(1);
    EXPECT_EQ(apply(m, Vector{Scalar(1), Scalar(1), Scalar(1)}), Vector::unit(1, Scalar(3)));
    // its first row never decays: no A0 witness
    EXPECT_FALSE(certify_class(m, OperatorClass::A0).decaying);
}

TEST(Apply, DimensionMismatch) {
    try {
        apply(MatrixOperator::identity(2), Vector::unit(3));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::dimension_mismatch);
    }
}

TEST(Adjoint, Transpose) {
    EXPECT_EQ(adjoint(m2("0", "1", "0", "0")), m2("0", "0", "1", "0"));
    const MatrixOperator sym = m2("1", "t", "t", "t^2");
    EXPECT_EQ(adjoint(sym), sym);
}

TEST(Adjoint, SpectralOperatorsAreSelfAdjoint) {
    const FamilyPtr f = OrthonormalFamily::from_members({Vector{Scalar(1), Scalar(1)}, Vector{Scalar(1), Scalar(-1)}});
    const MatrixOperator m = to_matrix(SpectralOperator(Scalar::t(), Vector{Scalar(1), Scalar::t(2)}, f), 3);
    EXPECT_EQ(adjoint(m), m);
}

TEST(Certify, DiagonalPowersDecay) {
    for (std::size_t k = 2; k <= 5; ++k) {
        std::vector<Scalar> d;
        for (std::size_t i = 1; i <= k; ++i) d.push_back(Scalar::t(static_cast<int>(i)));
        const ClassCertificate c = certify_class(MatrixOperator::diagonal(d), OperatorClass::A1);
        EXPECT_TRUE(c.finite_check);
        EXPECT_TRUE(c.decaying);
        ASSERT_EQ(c.profile.size(), k);
        for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(c.profile[i], NormValue::of_valuation(static_cast<long>(i + 1)));
    }
}

TEST(Certify, IdentityDoesNotDecay) {
    const ClassCertificate c = certify_class(MatrixOperator::identity(4), OperatorClass::A1);
    EXPECT_TRUE(c.finite_check);
    EXPECT_FALSE(c.decaying);
    for (const auto& n : c.profile) EXPECT_EQ(n, NormValue::of_valuation(0));
    EXPECT_FALSE(certify_class(MatrixOperator::identity(4), OperatorClass::compact).decaying);
}

TEST(Certify, MultiplicationOperatorDecays) {
    const MatrixOperator m = MatrixOperator::diagonal({Scalar::t(), Scalar::t(2), Scalar{}});
    EXPECT_TRUE(certify_class(m, OperatorClass::A1).decaying);
    EXPECT_TRUE(certify_class(m, OperatorClass::A0).decaying);
}

TEST(Certify, ImpreciseTailIsUnknown) {
    const MatrixOperator m = MatrixOperator::diagonal({Scalar(1), Scalar::big_o(0)});
    try {
        certify_class(m, OperatorClass::compact);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::unknown_tail);
    }
}

TEST(OperatorNorm, Examples) {
    EXPECT_EQ(operator_norm(MatrixOperator::diagonal({Scalar::t(), Scalar::t(2)})), NormValue::of_valuation(1));
    EXPECT_TRUE(operator_norm(MatrixOperator(3)).is_zero_norm());
    EXPECT_EQ(operator_norm(m2("1", "t", "t", "1")), NormValue::of_valuation(0));
}

TEST(OperatorNorm, ColumnAndEntryRoutesAgree) {
    const MatrixOperator m = m2("t^3", "t^-1 + 1", "0", "5*t");
    EXPECT_EQ(operator_norm(m), entry_norm(m));
    EXPECT_EQ(operator_norm(m), NormValue::of_valuation(-1));
}

TEST(HsInner, Projections) {
    const MatrixOperator p1 = MatrixOperator::diagonal({Scalar(1), Scalar{}});
    const MatrixOperator p2 = MatrixOperator::diagonal({Scalar{}, Scalar(1)});
    EXPECT_EQ(hs_inner(p1, p1), Scalar(1));
    EXPECT_EQ(hs_inner(p1, p2), Scalar{});
    EXPECT_EQ(hs_inner(MatrixOperator(2), m2("1", "t", "2", "3")), Scalar{});
}

TEST(HsInner, NormIsSquareRootOfForm) {
    const MatrixOperator m = m2("t", "t^2", "3*t", "0");
    EXPECT_EQ(hs_inner(m, m).valuation().sqrt(), entry_norm(m));
}

TEST(Compose, Projections) {
    const MatrixOperator p1 = MatrixOperator::diagonal({Scalar(1), Scalar{}});
    const MatrixOperator p2 = MatrixOperator::diagonal({Scalar{}, Scalar(1)});
    EXPECT_EQ(compose(p1, p2), MatrixOperator(2));
    EXPECT_EQ(compose(p1, p1), p1);
    const MatrixOperator m = m2("1", "t", "t^-1", "2");
    EXPECT_EQ(compose(m, MatrixOperator::identity(2)), m);
}
