#include "oracle_values.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace ncwb;
using testing_support::all_builtins;
using testing_support::random_member;

namespace {

const Algebra& dual_numbers_algebra() {
    static const Algebra a = truncated_poly_algebra(2);
    return a;
}

Bimodule kaehler_module() { return kaehler_calculus(dual_numbers_algebra()).module; }

}  // namespace

TEST(Algebra, DualNumbersProducts) {
    const Algebra& a = dual_numbers_algebra();
    const Vector x = a.basis(1);
    EXPECT_EQ(a.multiply(a.unit(), x), x);
    EXPECT_TRUE(is_zero(a.multiply(x, x)));
    EXPECT_THROW((void)a.multiply(x, Vector{1}), UsageError);
}

TEST(Algebra, QuantumPlaneCommutationRelation) {
    const Algebra a = quantum_plane_algebra(Rational(2), 2);
    // basis 1, x, y, x^2, xy, y^2
    EXPECT_EQ(a.name(4), "xy");
    EXPECT_EQ(a.multiply(a.basis(2), a.basis(1)), Rational(2) * a.basis(4));
    EXPECT_EQ(a.multiply(a.basis(1), a.basis(2)), a.basis(4));
}

TEST(Algebra, BuiltinAlgebrasPassTheirChecks) {
    for (const auto& b : all_builtins()) {
        EXPECT_TRUE(check_algebra(b.algebra.constants()).ok()) << b.name;
    }
    EXPECT_TRUE(check_algebra(matrix_unit_algebra(2, false).constants()).ok());
}

TEST(Algebra, PlantedBadUnitIsRejectedWithWitness) {
    StructureConstants sc = dual_numbers_algebra().constants();
    sc.unit = {0, 1};  // claims x is the unit
    const Report r = check_algebra(sc);
    EXPECT_FALSE(r.ok());
    EXPECT_GT(r.count("unit.left"), 0u);
    EXPECT_THROW(Algebra{sc}, ValidationError);
}

TEST(Algebra, PlantedNonAssociativeTable) {
    StructureConstants sc = truncated_poly_algebra(3).constants();
    sc.table[1][2] = {1, 0, 0};  // x * x^2 = 1, while (x*x)*x = x^2*x = 0
    const Report r = check_algebra(sc);
    EXPECT_GT(r.count("associativity"), 0u);
    EXPECT_EQ(r.violations.front().law, "associativity");
}

TEST(Algebra, LeftMultiplicationIsMultiplicative) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        EXPECT_EQ(a.left_mult(a.unit()), Matrix::identity(a.dim())) << b.name;
        for (std::size_t i = 0; i < a.dim(); ++i) {
            for (std::size_t j = 0; j < a.dim(); ++j) {
                EXPECT_EQ(a.left_mult(a.multiply(a.basis(i), a.basis(j))), a.left_mult(i) * a.left_mult(j));
            }
        }
    }
}

TEST(Bimodule, RegularAndKaehlerAreValid) {
    for (const auto& b : all_builtins()) {
        EXPECT_TRUE(check_bimodule(b.algebra, Bimodule::regular(b.algebra)).ok()) << b.name;
    }
    EXPECT_TRUE(check_bimodule(dual_numbers_algebra(), kaehler_module()).ok());
}

TEST(Bimodule, PlantedNonCommutingActions) {
    const Algebra& a = dual_numbers_algebra();
    Bimodule m;
    m.dim = 2;
    Matrix n(2, 2);
    n(1, 0) = Rational(1);
    m.left = {Matrix::identity(2), n};
    m.right = {Matrix::identity(2), n.transpose()};
    const Report r = check_bimodule(a, m);
    EXPECT_GT(r.count("commute"), 0u);
}

TEST(RightDual, RegularBimoduleIsTheAlgebra) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const DualBimodule d = right_dual(a, Bimodule::regular(a));
        ASSERT_EQ(d.dim(), a.dim()) << b.name;
        EXPECT_TRUE(check_bimodule(a, d.module).ok());
        // X -> X(1) is invertible and intertwines the actions
        const Matrix at_one = evaluate_at_unit(a, d);
        EXPECT_EQ(rank(at_one), a.dim());
        const BimoduleMap iso{d.module, Bimodule::regular(a), at_one};
        EXPECT_TRUE(check_bimodule_map(a, iso).ok()) << b.name;
    }
}

TEST(RightDual, KaehlerModuleOfDualNumbers) {
    const Algebra& a = dual_numbers_algebra();
    const DualBimodule d = right_dual(a, kaehler_module());
    ASSERT_EQ(d.dim(), 1u);
    const Matrix& x0 = d.evaluations[0];
    EXPECT_EQ(x0.column(0), (Vector{oracle::dual_numbers_kaehler_dual_eval[0], oracle::dual_numbers_kaehler_dual_eval[1]}));
    EXPECT_TRUE(d.module.left[1].is_zero());
    EXPECT_TRUE(d.module.right[1].is_zero());
    EXPECT_EQ(pair(d, {1}, {1}), a.basis(1));
}

TEST(Duals, ZeroBimoduleHasZeroDuals) {
    const Algebra& a = dual_numbers_algebra();
    EXPECT_EQ(right_dual(a, Bimodule::zero(a)).dim(), 0u);
    EXPECT_EQ(left_dual(a, Bimodule::zero(a)).dim(), 0u);
}

TEST(LeftDual, RegularAndKaehler) {
    for (const auto& b : all_builtins()) {
        EXPECT_EQ(left_dual(b.algebra, Bimodule::regular(b.algebra)).dim(), b.algebra.dim()) << b.name;
    }
    const DualBimodule d = left_dual(dual_numbers_algebra(), kaehler_module());
    ASSERT_EQ(d.dim(), 1u);
    EXPECT_EQ(d.evaluations[0].column(0), dual_numbers_algebra().basis(1));
}

TEST(Pair, RegularPairingIsMultiplication) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const DualBimodule d = right_dual(a, Bimodule::regular(a));
        const Matrix at_one = evaluate_at_unit(a, d);
        for (std::size_t i = 0; i < a.dim(); ++i) {
            // the dual element identified with e_i
            const Vector xi = *solve(at_one, a.basis(i));
            for (std::size_t j = 0; j < a.dim(); ++j) {
                EXPECT_EQ(pair(d, xi, a.basis(j)), a.multiply(a.basis(i), a.basis(j))) << b.name;
            }
        }
        EXPECT_TRUE(is_zero(pair(d, zero_vector(d.dim()), a.basis(0))));
    }
}

TEST(Pair, BalancedOverTheAlgebra) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const Bimodule& m = b.calculus.module;
        const DualBimodule d = right_dual(a, m);
        for (std::size_t x = 0; x < d.dim(); ++x) {
            const Vector xv = unit_vector(d.dim(), x);
            for (std::size_t i = 0; i < a.dim(); ++i) {
                for (std::size_t p = 0; p < m.dim; ++p) {
                    const Vector mv = unit_vector(m.dim, p);
                    EXPECT_EQ(pair(d, d.module.right[i].apply(xv), mv), pair(d, xv, m.left[i].apply(mv)));
                    EXPECT_EQ(pair(d, d.module.left[i].apply(xv), mv), a.multiply(a.basis(i), pair(d, xv, mv)));
                }
            }
        }
    }
}

TEST(Duals, SymmetricCommutativeCaseCoincides) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const Bimodule& m = b.calculus.module;
        if (!a.is_commutative() || m.left != m.right) {
            continue;
        }
        const DualBimodule r = right_dual(a, m);
        const DualBimodule l = left_dual(a, m);
        EXPECT_EQ(r.span, l.span) << b.name;
        EXPECT_EQ(r.module.left, l.module.left) << b.name;
        EXPECT_EQ(r.module.right, l.module.right) << b.name;
    }
}

TEST(BimoduleMapSpace, Examples) {
    const Algebra& a = dual_numbers_algebra();
    EXPECT_EQ(bimodule_map_space(Bimodule::regular(a), Bimodule::regular(a)).dim(), 2u);
    EXPECT_EQ(bimodule_map_space(Bimodule::zero(a), Bimodule::zero(a)).dim(), 0u);
    EXPECT_EQ(bimodule_map_space(Bimodule::regular(a), Bimodule::zero(a)).dim(), 0u);
    for (const auto& b : all_builtins()) {
        const Bimodule reg = Bimodule::regular(b.algebra);
        EXPECT_EQ(bimodule_map_space(reg, reg).dim(), oracle::values(b.name).regular_endomorphisms) << b.name;
    }
}

TEST(Transpose, IdentityAndZero) {
    const Algebra& a = dual_numbers_algebra();
    const Bimodule m = kaehler_module();
    const BimoduleMap id{m, m, Matrix::identity(m.dim)};
    EXPECT_EQ(transpose(a, id).matrix, Matrix::identity(1));
    const BimoduleMap zero{m, m, Matrix(1, 1)};
    EXPECT_TRUE(transpose(a, zero).matrix.is_zero());
}

TEST(Transpose, UniversalFactorOfDualNumbers) {
    const Algebra& a = dual_numbers_algebra();
    const DifferentialCalculus c = kaehler_calculus(a);
    const UniversalCalculus u = universal_calculus(a);
    const Factorization phi = factor_through_universal(a, c, u);
    ASSERT_TRUE(phi.map);
    const DualBimodule xu = right_dual(a, u.calculus.module);
    const DualBimodule mstar = right_dual(a, c.module);
    const BimoduleMap t = transpose(*phi.map, xu, mstar);
    const Matrix y = xu.evaluation(t.matrix.column(0));
    // Y(d_u x) = x and Y(x (x) x) = 0
    EXPECT_EQ(y.apply(u.calculus.differential.column(1)), a.basis(1));
    const Vector xx = *u.kernel.coordinates(unit_vector(4, 3));
    EXPECT_TRUE(is_zero(y.apply(xx)));
}

TEST(Properties, TransposeOfRandomMapsIsABimoduleMap) {
    std::mt19937 rng(2024);
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const Bimodule& m = b.calculus.module;
        const Bimodule reg = Bimodule::regular(a);
        const Subspace space = bimodule_map_space(m, reg);
        for (int trial = 0; trial < 4; ++trial) {
            const BimoduleMap alpha{m, reg, Matrix::from_flat(reg.dim, m.dim, random_member(rng, space))};
            ASSERT_TRUE(check_bimodule_map(a, alpha).ok());
            const BimoduleMap t = transpose(a, alpha);
            EXPECT_TRUE(check_bimodule_map(a, t).ok()) << b.name;
        }
    }
}

TEST(Properties, TransposeIsContravariant) {
    std::mt19937 rng(99);
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const Bimodule& m = b.calculus.module;
        const Bimodule reg = Bimodule::regular(a);
        const DualBimodule dm = right_dual(a, m);
        const DualBimodule dreg = right_dual(a, reg);
        const BimoduleMap beta{m, reg, Matrix::from_flat(reg.dim, m.dim, random_member(rng, bimodule_map_space(m, reg)))};
        const BimoduleMap alpha{reg, reg,
                                Matrix::from_flat(reg.dim, reg.dim, random_member(rng, bimodule_map_space(reg, reg)))};
        const BimoduleMap composite{m, reg, alpha.matrix * beta.matrix};
        EXPECT_EQ(transpose(composite, dm, dreg).matrix,
                  transpose(beta, dm, dreg).matrix * transpose(alpha, dreg, dreg).matrix)
            << b.name;
        EXPECT_EQ(transpose(BimoduleMap{m, m, Matrix::identity(m.dim)}, dm, dm).matrix, Matrix::identity(dm.dim()));
    }
}

TEST(Tensor, UnitContractionAndKaehler) {
    const Algebra& a = dual_numbers_algebra();
    const LeftModule e = LeftModule::free(a, 1);
    EXPECT_EQ(tensor_over(a, Bimodule::regular(a), e).module.dim, e.dim);
    const TensorProduct t = tensor_over(a, kaehler_module(), e);
    EXPECT_EQ(t.module.dim, 1u);
    EXPECT_TRUE(is_zero(t.element({1}, a.basis(1))));  // dx (x) x = dx.x (x) 1 = 0
    EXPECT_EQ(tensor_over(a, kaehler_module(), LeftModule{0, {Matrix(0, 0), Matrix(0, 0)}}).module.dim, 0u);
}

TEST(Tensor, FreeModuleOfRankTwo) {
    for (const auto& b : all_builtins()) {
        const LeftModule e = LeftModule::free(b.algebra, 2);
        EXPECT_EQ(tensor_over(b.algebra, b.calculus.module, e).module.dim, 2 * b.calculus.module.dim) << b.name;
    }
}

TEST(DoubleDual, CanonicalMapIsABimoduleMap) {
    for (const auto& b : all_builtins()) {
        const Algebra& a = b.algebra;
        const DoubleDual dd = double_dual(a, b.calculus.module);
        EXPECT_EQ(dd.left.dim(), oracle::values(b.name).double_dual_dim) << b.name;
        EXPECT_TRUE(check_bimodule_map(a, dd.canonical).ok()) << b.name;
        const DoubleDual reg = double_dual(a, Bimodule::regular(a));
        EXPECT_EQ(rank(reg.canonical.matrix), a.dim()) << b.name;
        EXPECT_EQ(reg.left.dim(), a.dim()) << b.name;
    }
}
