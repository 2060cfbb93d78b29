#include "oracle_values.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace ncwb;
using testing_support::all_builtins;

namespace {

const Algebra& dual_numbers_algebra() {
    static const Algebra a = truncated_poly_algebra(2);
    return a;
}

/// N = span{X0} with trivial x-actions and the given action matrix.
CartanPair one_field(const Matrix& action) {
    CartanPair p;
    p.module.dim = 1;
    p.module.left = {Matrix::identity(1), Matrix(1, 1)};
    p.module.right = p.module.left;
    p.action = {action};
    return p;
}

Matrix x_times_d_dx() {
    Matrix m(2, 2);
    m(1, 1) = Rational(1);
    return m;
}

}  // namespace

TEST(CheckCartan, DualNumbersField) {
    EXPECT_TRUE(check_cartan(dual_numbers_algebra(), one_field(x_times_d_dx())).ok());
    EXPECT_TRUE(check_cartan(dual_numbers_algebra(), CartanPair::zero(dual_numbers_algebra())).ok());
}

TEST(CheckCartan, PlainDerivativeDoesNotDescend) {
    Matrix ddx(2, 2);
    ddx(0, 1) = Rational(1);
    const Report r = check_cartan(dual_numbers_algebra(), one_field(ddx));
    ASSERT_EQ(r.count("cartan.leibniz"), 1u);
    EXPECT_EQ(r.count("cartan.linearity"), 1u);  // x.X0 = 0 but x X0(x) = x
    const Violation& v = *std::find_if(r.violations.begin(), r.violations.end(),
                                       [](const Violation& w) { return w.law == "cartan.leibniz"; });
    EXPECT_EQ(v.indices, (std::vector<std::size_t>{0, 1, 1}));  // X, f = x, g = x
    EXPECT_EQ(v.defect, (Vector{0, 1}));                          // X(x) x + (X.x)(x) - X(x^2) = x
}

TEST(CheckCartan, NaiveDerivativeFailsExactlyAtTopDegree) {
    for (std::size_t n = 2; n <= 6; ++n) {
        const Algebra a = truncated_poly_algebra(n);
        const Report r = check_cartan(a, fixtures::naive_derivative_pair(a));
        ASSERT_FALSE(r.ok()) << n;
        bool unit_field_seen = false;
        for (const auto& v : r.violations) {
            ASSERT_EQ(v.law, "cartan.leibniz");
            const std::size_t h = v.indices[0], i = v.indices[1], j = v.indices[2];
            EXPECT_EQ(i + j, n) << "witness off the top degree";
            if (h == 0) {
                unit_field_seen = true;
                Vector expected = zero_vector(n);
                expected[n - 1] = Rational(static_cast<long>(n));
                EXPECT_EQ(v.defect, expected);
            }
        }
        EXPECT_TRUE(unit_field_seen);
    }
}

TEST(CheckCartan, VacuumViolation) {
    const Algebra& a = dual_numbers_algebra();
    const Report r = check_cartan(a, fixtures::vacuum_violation(a));
    EXPECT_EQ(r.count("cartan.vacuum"), 1u);
}

TEST(PairFromCalculus, KaehlerGivesXTimesDdx) {
    const Algebra& a = dual_numbers_algebra();
    const DerivedPair d = pair_from_calculus(a, kaehler_calculus(a));
    ASSERT_EQ(d.pair.module.dim, 1u);
    EXPECT_EQ(d.pair.action[0], x_times_d_dx());
    EXPECT_TRUE(check_cartan(a, d.pair).ok());
}

TEST(PairFromCalculus, ZeroCalculusGivesZeroPair) {
    const Algebra& a = dual_numbers_algebra();
    const DerivedPair d = pair_from_calculus(a, DifferentialCalculus::zero(a, Bimodule::zero(a)));
    EXPECT_EQ(d.pair.module.dim, 0u);
}

TEST(PairFromCalculus, UniversalFieldsOfDualNumbers) {
    const Algebra& a = dual_numbers_algebra();
    const CoUniversalPair cu = co_universal_pair(a);
    ASSERT_EQ(cu.dim(), 2u);
    // every field sends 1 to 0 and x to some a + b x; together they reach all of A
    Matrix images(2, 2);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_TRUE(is_zero(cu.pair().action[k].column(0)));
        images.set_column(k, cu.pair().action[k].column(1));
    }
    EXPECT_EQ(rank(images), 2u);
    EXPECT_TRUE(check_cartan(a, cu.pair()).ok());
}

TEST(CalculusFromPair, Examples) {
    const Algebra& a = dual_numbers_algebra();
    const DerivedCalculus d = calculus_from_pair(a, one_field(x_times_d_dx()));
    ASSERT_EQ(d.calculus.module.dim, 1u);
    // d x evaluates at X0 to x
    EXPECT_EQ(d.dual.evaluation(d.calculus.differential.column(1)).column(0), a.basis(1));
    EXPECT_TRUE(check_leibniz(a, d.calculus).ok());
    EXPECT_EQ(calculus_from_pair(a, CartanPair::zero(a)).calculus.module.dim, 0u);

    const CoUniversalPair cu = co_universal_pair(a);
    const DerivedCalculus back = calculus_from_pair(a, cu.pair());
    for (std::size_t k = 0; k < cu.dim(); ++k) {
        EXPECT_EQ(back.dual.evaluation(back.calculus.differential.column(1)).column(k), cu.pair().action[k].column(1));
    }
}

TEST(Duality, EveryBuiltinRoundTrips) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        EXPECT_TRUE(check_cartan(a, pair_from_calculus(a, b.calculus).pair).ok()) << b.name;
        EXPECT_TRUE(check_leibniz(a, calculus_from_pair(a, b.pair).calculus).ok()) << b.name;
        EXPECT_EQ(b.pair.module.dim, oracle::values(b.name).pair_dim) << b.name;
    }
}

TEST(Duality, CommutativeSymmetricCollapseToPlainLeibniz) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const Bimodule& n = b.pair.module;
        if (!a.is_commutative() || n.left != n.right) {
            continue;
        }
        for (const auto& x : b.pair.action) {
            for (std::size_t i = 0; i < a.dim(); ++i) {
                for (std::size_t j = 0; j < a.dim(); ++j) {
                    const Vector lhs = x.apply(a.constants().table[i][j]);
                    const Vector rhs = a.multiply(x.column(i), a.basis(j)) + a.multiply(a.basis(i), x.column(j));
                    EXPECT_EQ(lhs, rhs) << b.name;
                }
            }
        }
    }
}

TEST(ActionKernel, Examples) {
    const Algebra& a = dual_numbers_algebra();
    EXPECT_EQ(action_kernel(a, one_field(x_times_d_dx())).dim(), 0u);
    EXPECT_EQ(action_kernel(a, one_field(Matrix(2, 2))).dim(), 1u);
    EXPECT_EQ(action_kernel(a, CartanPair::zero(a)).dim(), 0u);
    for (const auto& b : all_builtins()) {
        EXPECT_EQ(action_kernel(b.algebra, b.pair).dim(), oracle::values(b.name).action_kernel_dim) << b.name;
    }
}

TEST(SpanningDiagnostic, Examples) {
    const Algebra& a = dual_numbers_algebra();
    const SpanningDiagnostic zero = spanning_kernel_diagnostic(a, CartanPair::zero(a));
    EXPECT_TRUE(zero.spanned && zero.trivial_kernel && zero.agree);
    const SpanningDiagnostic planted = spanning_kernel_diagnostic(a, one_field(Matrix(2, 2)));
    EXPECT_FALSE(planted.trivial_kernel);
    const SpanningDiagnostic kaehler = spanning_kernel_diagnostic(a, one_field(x_times_d_dx()));
    EXPECT_TRUE(kaehler.trivial_kernel);
    EXPECT_EQ(kaehler.agree, kaehler.spanned == kaehler.trivial_kernel);
}

TEST(CoUniversal, DimensionsMatchOracle) {
    for (const auto& b : all_builtins()) {
        const CoUniversalPair cu = co_universal_pair(b.algebra);
        EXPECT_EQ(cu.dim(), oracle::values(b.name).x_u_dim) << b.name;
        EXPECT_TRUE(check_cartan(b.algebra, cu.pair()).ok()) << b.name;
    }
}

TEST(CoUniversal, FactorizationExamples) {
    const Algebra& a = dual_numbers_algebra();
    const CoUniversalPair cu = co_universal_pair(a);
    const Factorization self = co_universal_factorization(a, cu.pair(), cu);
    ASSERT_TRUE(self.map);
    EXPECT_TRUE(self.unique);
    EXPECT_EQ(self.map->matrix, Matrix::identity(cu.dim()));

    const Factorization zero = co_universal_factorization(a, CartanPair::zero(a), cu);
    ASSERT_TRUE(zero.map);
    EXPECT_EQ(zero.map->matrix.cols(), 0u);
}

TEST(CoUniversal, FactorizationIsTransposeOfUniversalFactor) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const UniversalCalculus u = universal_calculus(a);
        const CoUniversalPair cu = co_universal_pair(a);
        const DerivedPair d = pair_from_calculus(a, b.calculus);
        const Factorization big_phi = co_universal_factorization(a, d.pair, cu);
        ASSERT_TRUE(big_phi.map) << b.name;
        EXPECT_TRUE(big_phi.unique) << b.name;
        const Factorization phi = factor_through_universal(a, b.calculus, u);
        ASSERT_TRUE(phi.map);
        EXPECT_EQ(transpose(*phi.map, cu.derived.dual, d.dual).matrix, big_phi.map->matrix) << b.name;
        // partial_u o Phi = partial, field by field
        for (std::size_t x = 0; x < d.pair.module.dim; ++x) {
            EXPECT_EQ(cu.pair().action_of(big_phi.map->matrix.column(x), a.dim()), d.pair.action[x]) << b.name;
        }
    }
}

TEST(Reflexive, InnerCalculusOnRegularBimoduleIsIsomorphic) {
    for (const char* name : {"upper_triangular_2", "matrix_2", "group_algebra_z2", "quantum_plane_trunc"}) {
        const ExampleBundle b = builtin(name);
        const RoundtripReport r = reflexive_roundtrip(b.algebra, b.calculus);
        EXPECT_TRUE(r.isomorphism()) << name;
        EXPECT_TRUE(r.intertwines) << name;
        EXPECT_TRUE(r.pair_check.ok() && r.leibniz_check.ok()) << name;
    }
}

TEST(Reflexive, KaehlerAndZero) {
    const Algebra& a = dual_numbers_algebra();
    const RoundtripReport k = reflexive_roundtrip(a, kaehler_calculus(a));
    EXPECT_EQ(k.back.calculus.module.dim, oracle::values("dual_numbers").double_dual_dim);
    EXPECT_TRUE(k.is_bimodule_map);
    EXPECT_TRUE(k.injective && k.surjective);
    const RoundtripReport z = reflexive_roundtrip(a, DifferentialCalculus::zero(a, Bimodule::zero(a)));
    EXPECT_TRUE(z.isomorphism());
}
