#pragma once

#include "ncwb/calculus.hpp"

namespace ncwb {

/// Bimodule N with a right action: action[a] is the n x n matrix of X_a acting on A.
struct CartanPair {
    Bimodule module;
    std::vector<Matrix> action;

    [[nodiscard]] Matrix action_of(const Vector& x, std::size_t n) const { return combine(action, x, n, n); }

    static CartanPair zero(const Algebra& a) { return {Bimodule::zero(a), {}}; }
};

/// Exhaustive check of (f.X)(g) = f X(g), X(fg) = X(f) g + (X.f)(g) and X(1) = 0.
/// Witness indices: (f, X, g) for the first law, (X, f, g) for the second, (X) for the vacuum.
inline Report check_cartan(const Algebra& a, const CartanPair& p) {
    Report r = check_bimodule(a, p.module);
    if (!r.ok()) {
        return r;
    }
    const std::size_t n = a.dim();
    if (!detail::square_family(p.action, p.module.dim, n)) {
        r.add("shape", {}, "action needs one n x n matrix per module basis element");
        return r;
    }
    auto xname = [&](std::size_t k) { return p.module.name(k, "X"); };
    for (std::size_t x = 0; x < p.module.dim; ++x) {
        for (std::size_t i = 0; i < n; ++i) {
            const Matrix lhs = p.action_of(p.module.left[i].column(x), n);
            const Matrix rhs = a.left_mult(i) * p.action[x];
            for (std::size_t j = 0; j < n; ++j) {
                if (lhs.column(j) != rhs.column(j)) {
                    r.add("cartan.linearity", {i, x, j}, "f=" + a.name(i) + ", X=" + xname(x) + ", g=" + a.name(j),
                          rhs.column(j) - lhs.column(j));
                }
            }
        }
    }
    for (std::size_t x = 0; x < p.module.dim; ++x) {
        for (std::size_t i = 0; i < n; ++i) {
            const Vector xf = p.action[x].column(i);
            const Matrix twisted = p.action_of(p.module.right[i].column(x), n);
            for (std::size_t j = 0; j < n; ++j) {
                const Vector lhs = p.action[x].apply(a.constants().table[i][j]);
                const Vector rhs = a.right_mult(j).apply(xf) + twisted.column(j);
                if (lhs != rhs) {
                    r.add("cartan.leibniz", {x, i, j}, "X=" + xname(x) + ", f=" + a.name(i) + ", g=" + a.name(j),
                          rhs - lhs);
                }
            }
        }
        const Vector vac = p.action[x].apply(a.unit());
        if (!is_zero(vac)) {
            r.add("cartan.vacuum", {x}, "X=" + xname(x), zero_vector(n) - vac);
        }
    }
    return r;
}

/// The right Cartan pair (M*, partial) of a calculus, keeping the dual's evaluation maps.
struct DerivedPair {
    DualBimodule dual;
    CartanPair pair;
};

/// X^partial(f) = <X, df> on the right dual.
inline DerivedPair pair_from_calculus(const Algebra& a, const DifferentialCalculus& c) {
    DerivedPair d;
    d.dual = right_dual(a, c.module);
    d.pair.module = d.dual.module;
    for (const auto& x : d.dual.evaluations) {
        d.pair.action.push_back(x * c.differential);
    }
    return d;
}

/// The *N-valued calculus of a pair, keeping the left dual's evaluation maps.
struct DerivedCalculus {
    DualBimodule dual;
    DifferentialCalculus calculus;
};

/// d_rho f is the left-linear map N -> A sending X to X^partial(f).
/// Throws UsageError when some d_rho f is not left-linear, i.e. the pair violates (f.X)(g) = f X(g).
inline DerivedCalculus calculus_from_pair(const Algebra& a, const CartanPair& p) {
    const std::size_t n = a.dim();
    DerivedCalculus d;
    d.dual = left_dual(a, p.module);
    d.calculus.module = d.dual.module;
    d.calculus.differential = Matrix(d.dual.dim(), n);
    for (std::size_t j = 0; j < n; ++j) {
        Matrix z(n, p.module.dim);
        for (std::size_t x = 0; x < p.module.dim; ++x) {
            z.set_column(x, p.action[x].column(j));
        }
        d.calculus.differential.set_column(j, d.dual.require_coordinates(z));
    }
    return d;
}

/// {X in N : X^partial = 0}.
inline Subspace action_kernel(const Algebra& a, const CartanPair& p) {
    const std::size_t n = a.dim();
    Matrix flat(n * n, p.module.dim);
    for (std::size_t x = 0; x < p.module.dim; ++x) {
        flat.set_column(x, p.action[x].flatten());
    }
    return kernel(flat);
}

struct SpanningDiagnostic {
    bool spanned = false;
    bool trivial_kernel = false;
    bool agree = false;
};

/// Reports both sides of the spanning / trivial-kernel correspondence without asserting it.
inline SpanningDiagnostic spanning_kernel_diagnostic(const Algebra& a, const CartanPair& p) {
    SpanningDiagnostic s;
    s.spanned = is_spanned_by_differential(a, calculus_from_pair(a, p).calculus);
    s.trivial_kernel = action_kernel(a, p).dim() == 0;
    s.agree = s.spanned == s.trivial_kernel;
    return s;
}

/// (X_u(A), partial_u): the pair dual to the universal calculus.
struct CoUniversalPair {
    UniversalCalculus universal;
    DerivedPair derived;

    [[nodiscard]] const CartanPair& pair() const { return derived.pair; }
    [[nodiscard]] std::size_t dim() const { return derived.pair.module.dim; }
};

inline CoUniversalPair co_universal_pair(const Algebra& a) {
    CoUniversalPair cu;
    cu.universal = universal_calculus(a);
    cu.derived = pair_from_calculus(a, cu.universal.calculus);
    return cu;
}

/// Solves for the bimodule map Phi : N -> X_u(A) with partial_u o Phi = partial.
/// Existence and uniqueness are reported, not assumed.
inline Factorization co_universal_factorization(const Algebra& a, const CartanPair& p, const CoUniversalPair& cu) {
    const std::size_t n = a.dim();
    const std::size_t k = cu.dim();
    const std::size_t dim_n = p.module.dim;
    Matrix universal_actions(n * n, k);
    for (std::size_t b = 0; b < k; ++b) {
        universal_actions.set_column(b, cu.pair().action[b].flatten());
    }
    Matrix target(n * n, dim_n);
    for (std::size_t x = 0; x < dim_n; ++x) {
        target.set_column(x, p.action[x].flatten());
    }
    MatrixSystem sys(k, dim_n);
    add_intertwining(sys, p.module, cu.pair().module);
    sys.add({{Rational(1), universal_actions, Matrix::identity(dim_n)}}, target);

    Factorization f;
    auto sol = sys.solve();
    f.exists = sol.has_value();
    if (sol) {
        f.freedom = sol->homogeneous.dim();
        f.unique = f.freedom == 0;
        f.matches_formula = true;
        f.map = BimoduleMap{p.module, cu.pair().module, Matrix::from_flat(k, dim_n, sol->particular)};
    }
    return f;
}

inline Factorization co_universal_factorization(const Algebra& a, const CartanPair& p) {
    return co_universal_factorization(a, p, co_universal_pair(a));
}

/// Calculus -> pair -> calculus, compared with the original through M -> *(M*).
struct RoundtripReport {
    DerivedPair pair;
    DerivedCalculus back;
    BimoduleMap canonical;
    Report pair_check;
    Report leibniz_check;
    bool is_bimodule_map = false;
    bool injective = false;
    bool surjective = false;
    bool intertwines = false;

    [[nodiscard]] bool isomorphism() const { return is_bimodule_map && injective && surjective; }
};

inline RoundtripReport reflexive_roundtrip(const Algebra& a, const DifferentialCalculus& c) {
    RoundtripReport r;
    r.pair = pair_from_calculus(a, c);
    r.pair_check = check_cartan(a, r.pair.pair);
    r.back = calculus_from_pair(a, r.pair.pair);
    r.leibniz_check = check_leibniz(a, r.back.calculus);
    r.canonical = double_dual(a, c.module).canonical;
    r.is_bimodule_map = check_bimodule_map(a, r.canonical).ok();
    const std::size_t rk = rank(r.canonical.matrix);
    r.injective = rk == c.module.dim;
    r.surjective = rk == r.back.calculus.module.dim;
    r.intertwines = r.canonical.matrix * c.differential == r.back.calculus.differential;
    return r;
}

}  // namespace ncwb
