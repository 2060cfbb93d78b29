#pragma once

#include "ncwb/cartan.hpp"

namespace ncwb {

/// Left connection nabla : E -> M (x)_A E; column s is nabla(xi_s) in tensor-quotient coordinates.
struct Connection {
    DifferentialCalculus calculus;
    LeftModule module;
    TensorProduct tensor;
    Matrix nabla;  // tensor.module.dim x module.dim
};

/// <<X, .>> : M (x)_A E -> E for X in the right dual, as a matrix on quotient coordinates.
/// Throws ValidationError when the raw contraction does not kill the balancing relations.
inline Matrix contraction_matrix(const DualBimodule& dual, const TensorProduct& t, const LeftModule& e,
                                 const Vector& x) {
    if (dual.side != Side::right) {
        throw UsageError("contraction needs the right dual");
    }
    const Matrix eval = dual.evaluation(x);
    const std::size_t r = e.dim;
    Matrix raw(r, t.bimodule_dim * r);
    for (std::size_t p = 0; p < t.bimodule_dim; ++p) {
        const Matrix act = e.left_action(eval.column(p));
        for (std::size_t s = 0; s < r; ++s) {
            raw.set_column(p * r + s, act.column(s));
        }
    }
    for (const auto& rel : t.quotient.relations().basis()) {
        if (!is_zero(raw.apply(rel))) {
            throw ValidationError("contraction is not balanced over the algebra", {});
        }
    }
    return raw * t.quotient.lift();
}

inline Vector contract(const DualBimodule& dual, const TensorProduct& t, const LeftModule& e, const Vector& x,
                       const Vector& element) {
    return contraction_matrix(dual, t, e, x).apply(element);
}

/// nabla_X = <<X, nabla(.)>> as an endomorphism of E.
inline Matrix covariant_derivative(const Connection& c, const DualBimodule& dual, const Vector& x) {
    return contraction_matrix(dual, c.tensor, c.module, x) * c.nabla;
}

/// Witnesses (f, xi) of nabla(f.xi) != f.nabla(xi) + df (x) xi. Defect is rhs - lhs.
inline Report check_connection(const Algebra& a, const Connection& c) {
    Report r = check_left_module(a, c.module);
    if (!r.ok()) {
        return r;
    }
    const std::size_t q = c.tensor.module.dim;
    if (c.nabla.rows() != q || c.nabla.cols() != c.module.dim || c.calculus.differential.cols() != a.dim()) {
        r.add("shape", {}, "connection matrix does not match tensor product and module dimensions");
        return r;
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const Vector df = c.calculus.differential.column(i);
        for (std::size_t s = 0; s < c.module.dim; ++s) {
            const Vector lhs = c.nabla.apply(c.module.left[i].column(s));
            const Vector rhs = c.tensor.module.left[i].apply(c.nabla.column(s)) +
                               c.tensor.element(df, unit_vector(c.module.dim, s));
            if (lhs != rhs) {
                r.add("connection.leibniz", {i, s}, "f=" + a.name(i) + ", xi=e" + std::to_string(s), rhs - lhs);
            }
        }
    }
    return r;
}

/// nabla_{f.X} xi = f.nabla_X xi and nabla_X(f.xi) = X^partial(f).xi + nabla_{X.f} xi on all basis triples.
/// `derived` must come from pair_from_calculus on the connection's calculus.
inline Report check_covariant_axioms(const Algebra& a, const Connection& c, const DerivedPair& derived) {
    Report r;
    const DualBimodule& dual = derived.dual;
    const std::size_t k = dual.dim();
    std::vector<Matrix> cov;
    for (std::size_t b = 0; b < k; ++b) {
        cov.push_back(covariant_derivative(c, dual, unit_vector(k, b)));
    }
    auto cov_of = [&](const Vector& x) { return combine(cov, x, c.module.dim, c.module.dim); };
    for (std::size_t b = 0; b < k; ++b) {
        const std::string xname = dual.module.name(b, "X");
        for (std::size_t i = 0; i < a.dim(); ++i) {
            const Matrix fx = cov_of(dual.module.left[i].column(b));
            const Matrix f_then = c.module.left[i] * cov[b];
            const Matrix xf = cov_of(dual.module.right[i].column(b));
            const Matrix shift = c.module.left_action(derived.pair.action[b].column(i));
            const Matrix after = cov[b] * c.module.left[i];
            for (std::size_t s = 0; s < c.module.dim; ++s) {
                const std::string where = "X=" + xname + ", f=" + a.name(i) + ", xi=e" + std::to_string(s);
                if (fx.column(s) != f_then.column(s)) {
                    r.add("covariant.linearity", {b, i, s}, where, f_then.column(s) - fx.column(s));
                }
                const Vector rhs = shift.column(s) + xf.column(s);
                if (after.column(s) != rhs) {
                    r.add("covariant.leibniz", {b, i, s}, where, rhs - after.column(s));
                }
            }
        }
    }
    return r;
}

inline Connection make_connection(const Algebra& a, DifferentialCalculus calculus, LeftModule e, Matrix nabla) {
    TensorProduct t = tensor_over(a, calculus.module, e);
    return {std::move(calculus), std::move(e), std::move(t), std::move(nabla)};
}

/// nabla(f.eps_a) = df (x) eps_a on the free module A^r.
inline Connection trivial_connection(const Algebra& a, const DifferentialCalculus& c, std::size_t r) {
    const std::size_t n = a.dim();
    Connection conn = make_connection(a, c, LeftModule::free(a, r), Matrix());
    conn.nabla = Matrix(conn.tensor.module.dim, conn.module.dim);
    for (std::size_t copy = 0; copy < r; ++copy) {
        Vector eps = zero_vector(conn.module.dim);
        for (std::size_t j = 0; j < n; ++j) {
            eps[copy * n + j] = a.unit()[j];
        }
        for (std::size_t j = 0; j < n; ++j) {
            conn.nabla.set_column(copy * n + j, conn.tensor.element(c.differential.column(j), eps));
        }
    }
    return conn;
}

/// The affine space of connections on E; homogeneous part = left-module maps E -> M (x)_A E.
struct ConnectionSpace {
    bool exists = false;
    std::optional<Connection> particular;
    Subspace homogeneous;  // flattened q x r matrices
};

inline ConnectionSpace connection_space(const Algebra& a, const DifferentialCalculus& c, const LeftModule& e) {
    TensorProduct t = tensor_over(a, c.module, e);
    const std::size_t q = t.module.dim;
    const std::size_t r = e.dim;
    MatrixSystem sys(q, r);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        Matrix rhs(q, r);
        for (std::size_t s = 0; s < r; ++s) {
            rhs.set_column(s, t.element(c.differential.column(i), unit_vector(r, s)));
        }
        sys.add({{Rational(1), Matrix::identity(q), e.left[i]}, {Rational(-1), t.module.left[i], Matrix::identity(r)}},
                rhs);
    }
    ConnectionSpace out;
    out.homogeneous = sys.homogeneous();
    auto sol = sys.solve();
    out.exists = sol.has_value();
    if (sol) {
        out.particular = Connection{c, e, std::move(t), Matrix::from_flat(q, r, sol->particular)};
    }
    return out;
}

}  // namespace ncwb
