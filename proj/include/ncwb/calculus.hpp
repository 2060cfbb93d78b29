#pragma once

#include "ncwb/module.hpp"

namespace ncwb {

/// First-order differential calculus (M, d); column j of `differential` is d(e_j).
struct DifferentialCalculus {
    Bimodule module;
    Matrix differential;  // module.dim x n

    [[nodiscard]] Vector d(const Vector& f) const { return differential.apply(f); }

    /// d = 0 into the given bimodule.
    static DifferentialCalculus zero(const Algebra& a, Bimodule m) {
        const std::size_t dim = m.dim;
        return {std::move(m), Matrix(dim, a.dim())};
    }
};

/// Every basis pair (f, g) with d(fg) != (df).g + f.(dg). Defect is rhs - lhs.
inline Report check_leibniz(const Algebra& a, const DifferentialCalculus& c) {
    Report r = check_bimodule(a, c.module);
    if (!r.ok()) {
        return r;
    }
    if (c.differential.rows() != c.module.dim || c.differential.cols() != a.dim()) {
        r.add("shape", {}, "differential matrix does not match module and algebra dimensions");
        return r;
    }
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {
        const Vector di = c.differential.column(i);
        for (std::size_t j = 0; j < n; ++j) {
            const Vector lhs = c.d(a.constants().table[i][j]);
            const Vector rhs = c.module.right[j].apply(di) + c.module.left[i].apply(c.differential.column(j));
            if (lhs != rhs) {
                r.add("leibniz", {i, j}, "f=" + a.name(i) + ", g=" + a.name(j), rhs - lhs);
            }
        }
    }
    return r;
}

/// Omega^1_u(A) = ker(mult) inside A (x) A, with d_u f = 1 (x) f - f (x) 1.
struct UniversalCalculus {
    DifferentialCalculus calculus;
    Subspace kernel;   // inside A (x) A, index i*n + j for e_i (x) e_j
    Matrix embedding;  // n^2 x dim, columns are the kernel basis
};

inline UniversalCalculus universal_calculus(const Algebra& a) {
    const std::size_t n = a.dim();
    UniversalCalculus u;
    u.kernel = kernel(a.mult_map());
    u.embedding = u.kernel.basis_matrix();
    const std::size_t k = u.kernel.dim();
    const Matrix id = Matrix::identity(n);
    auto restrict_to_kernel = [&](const Matrix& act) {
        Matrix out(k, k);
        for (std::size_t b = 0; b < k; ++b) {
            auto c = u.kernel.coordinates(act.apply(u.kernel.basis()[b]));
            if (!c) {
                throw ValidationError("kernel of multiplication is not a sub-bimodule", {});
            }
            out.set_column(b, *c);
        }
        return out;
    };
    Bimodule& m = u.calculus.module;
    m.dim = k;
    for (std::size_t i = 0; i < n; ++i) {
        m.left.push_back(restrict_to_kernel(kron(a.left_mult(i), id)));
        m.right.push_back(restrict_to_kernel(kron(id, a.right_mult(i))));
    }
    u.calculus.differential = Matrix(k, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector t = zero_vector(n * n);
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                if (p == j) {
                    t[p * n + q] -= a.unit()[q];
                }
                if (q == j) {
                    t[p * n + q] += a.unit()[p];
                }
            }
        }
        auto c = u.kernel.coordinates(t);
        if (!c) {
            throw ValidationError("d_u does not land in the kernel of multiplication", {});
        }
        u.calculus.differential.set_column(j, *c);
    }
    return u;
}

/// Outcome of solving for a map in a universal diagram.
struct Factorization {
    std::optional<BimoduleMap> map;
    bool exists = false;
    bool unique = false;
    std::size_t freedom = 0;  // dimension of the affine solution set
    bool matches_formula = false;
};

/// phi : Omega^1_u -> M with phi(sum f_i (x) g_i) = sum f_i.dg_i, then checked to be
/// the only bimodule map with phi o d_u = d.
inline Factorization factor_through_universal(const Algebra& a, const DifferentialCalculus& c,
                                              const UniversalCalculus& u) {
    const std::size_t n = a.dim();
    const std::size_t m = c.module.dim;
    Matrix psi(m, n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            psi.set_column(i * n + j, c.module.left[i].apply(c.differential.column(j)));
        }
    }
    Matrix phi = psi * u.embedding;

    MatrixSystem sys(m, u.kernel.dim());
    add_intertwining(sys, u.calculus.module, c.module);
    sys.add({{Rational(1), Matrix::identity(m), u.calculus.differential}}, c.differential);

    Factorization f;
    auto sol = sys.solve();
    f.exists = sol.has_value();
    if (sol) {
        f.freedom = sol->homogeneous.dim();
        f.unique = f.freedom == 0;
    }
    f.matches_formula = sys.satisfied_by(phi);
    if (f.matches_formula) {
        f.map = BimoduleMap{u.calculus.module, c.module, std::move(phi)};
    }
    return f;
}

inline Factorization factor_through_universal(const Algebra& a, const DifferentialCalculus& c) {
    return factor_through_universal(a, c, universal_calculus(a));
}

/// Sub-bimodule generated by the image of d.
inline Subspace differential_span(const Algebra& a, const DifferentialCalculus& c) {
    std::vector<Vector> seed;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        seed.push_back(c.differential.column(j));
    }
    std::vector<Matrix> ops = c.module.left;
    ops.insert(ops.end(), c.module.right.begin(), c.module.right.end());
    return invariant_closure(c.module.dim, seed, ops);
}

inline bool is_spanned_by_differential(const Algebra& a, const DifferentialCalculus& c) {
    return differential_span(a, c).dim() == c.module.dim;
}

}  // namespace ncwb
