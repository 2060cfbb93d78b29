#pragma once

#include "ncwb/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncwb {

/// Two-sided module given by action matrices for each algebra basis element.
/// Column vectors: left[i] * m is e_i.m, right[i] * m is m.e_i.
struct Bimodule {
    std::size_t dim = 0;
    std::vector<Matrix> left;
    std::vector<Matrix> right;
    std::vector<std::string> basis_names;  // optional; generated on demand when empty

    [[nodiscard]] Matrix left_action(const Vector& f) const { return combine(left, f, dim, dim); }
    [[nodiscard]] Matrix right_action(const Vector& g) const { return combine(right, g, dim, dim); }

    [[nodiscard]] std::string name(std::size_t i, const std::string& stem = "m") const {
        return i < basis_names.size() ? basis_names[i] : stem + std::to_string(i);
    }

    /// A acting on itself by left and right multiplication.
    static Bimodule regular(const Algebra& a) {
        Bimodule m;
        m.dim = a.dim();
        for (std::size_t i = 0; i < a.dim(); ++i) {
            m.left.push_back(a.left_mult(i));
            m.right.push_back(a.right_mult(i));
        }
        m.basis_names = a.basis_names();
        return m;
    }

    static Bimodule zero(const Algebra& a) {
        Bimodule m;
        m.left.assign(a.dim(), Matrix(0, 0));
        m.right.assign(a.dim(), Matrix(0, 0));
        return m;
    }
};

/// Left module: left[i] * v is e_i.v.
struct LeftModule {
    std::size_t dim = 0;
    std::vector<Matrix> left;

    [[nodiscard]] Matrix left_action(const Vector& f) const { return combine(left, f, dim, dim); }

    /// Free module A^r; basis index a*n + j is e_j in copy a.
    static LeftModule free(const Algebra& a, std::size_t r) {
        LeftModule e;
        const std::size_t n = a.dim();
        e.dim = n * r;
        for (std::size_t i = 0; i < n; ++i) {
            Matrix l(e.dim, e.dim);
            for (std::size_t copy = 0; copy < r; ++copy) {
                for (std::size_t x = 0; x < n; ++x) {
                    for (std::size_t y = 0; y < n; ++y) {
                        l(copy * n + x, copy * n + y) = a.left_mult(i)(x, y);
                    }
                }
            }
            e.left.push_back(std::move(l));
        }
        return e;
    }
};

namespace detail {

inline bool square_family(const std::vector<Matrix>& ms, std::size_t count, std::size_t dim) {
    if (ms.size() != count) {
        return false;
    }
    for (const auto& m : ms) {
        if (m.rows() != dim || m.cols() != dim) {
            return false;
        }
    }
    return true;
}

/// Checks that `act` is a unital (anti-)representation: act_i act_j = act_{e_i e_j} (or e_j e_i).
inline void check_representation(const Algebra& a, const std::vector<Matrix>& act, std::size_t dim, bool anti,
                                 const std::string& law, Report& r) {
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const Vector& c = a.constants().table[i][j];
            const Matrix expected = combine(act, c, dim, dim);
            const Matrix actual = anti ? act[j] * act[i] : act[i] * act[j];
            if (actual != expected) {
                r.add(law + ".hom", {i, j}, "f=" + a.name(i) + ", g=" + a.name(j), (expected - actual).flatten());
            }
        }
    }
    const Matrix one = combine(act, a.unit(), dim, dim);
    if (one != Matrix::identity(dim)) {
        r.add(law + ".unit", {}, "1 does not act as the identity", (Matrix::identity(dim) - one).flatten());
    }
}

}  // namespace detail

/// Lists violations of the left homomorphism law, the right anti-homomorphism law,
/// unitality, and commutation of the two actions.
inline Report check_bimodule(const Algebra& a, const Bimodule& m) {
    Report r;
    if (!detail::square_family(m.left, a.dim(), m.dim) || !detail::square_family(m.right, a.dim(), m.dim)) {
        r.add("shape", {}, "action matrices do not match the algebra and module dimensions");
        return r;
    }
    detail::check_representation(a, m.left, m.dim, false, "left", r);
    detail::check_representation(a, m.right, m.dim, true, "right", r);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            const Matrix lr = m.left[i] * m.right[j];
            const Matrix rl = m.right[j] * m.left[i];
            if (lr != rl) {
                r.add("commute", {i, j}, "f=" + a.name(i) + ", g=" + a.name(j), (rl - lr).flatten());
            }
        }
    }
    return r;
}

inline Report check_left_module(const Algebra& a, const LeftModule& e) {
    Report r;
    if (!detail::square_family(e.left, a.dim(), e.dim)) {
        r.add("shape", {}, "action matrices do not match the algebra and module dimensions");
        return r;
    }
    detail::check_representation(a, e.left, e.dim, false, "left", r);
    return r;
}

/// Linear constraints on an unknown matrix T (rows x cols) of the form
/// sum_t coef_t * L_t T R_t = rhs, accumulated block by block.
class MatrixSystem {
public:
    struct Term {
        Rational coef;
        Matrix left;
        Matrix right;
    };

    MatrixSystem(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    void add(const std::vector<Term>& terms, const Matrix& rhs) {
        if (terms.empty()) {
            return;
        }
        const std::size_t out_rows = terms.front().left.rows();
        const std::size_t out_cols = terms.front().right.cols();
        Matrix block(out_rows * out_cols, rows_ * cols_);
        for (const auto& t : terms) {
            if (t.left.cols() != rows_ || t.right.rows() != cols_ || t.left.rows() != out_rows ||
                t.right.cols() != out_cols) {
                throw UsageError("matrix equation term has incompatible shape");
            }
            block.add_scaled(t.coef, sandwich_operator(t.left, t.right));
        }
        if (rhs.rows() != out_rows || rhs.cols() != out_cols) {
            throw UsageError("matrix equation right-hand side has wrong shape");
        }
        blocks_.push_back(std::move(block));
        rhs_.insert(rhs_.end(), rhs.flatten().begin(), rhs.flatten().end());
    }

    void add_homogeneous(const std::vector<Term>& terms) {
        if (terms.empty()) {
            return;
        }
        add(terms, Matrix(terms.front().left.rows(), terms.front().right.cols()));
    }

    [[nodiscard]] std::size_t unknown_rows() const { return rows_; }
    [[nodiscard]] std::size_t unknown_cols() const { return cols_; }
    [[nodiscard]] Matrix coefficients() const { return vstack(blocks_, rows_ * cols_); }

    /// Solutions of the homogeneous part, as flattened matrices.
    [[nodiscard]] Subspace homogeneous() const { return kernel(coefficients()); }
    [[nodiscard]] std::optional<AffineSolution> solve() const { return solve_affine(coefficients(), rhs_); }

    /// Whether T satisfies every accumulated equation.
    [[nodiscard]] bool satisfied_by(const Matrix& t) const {
        return coefficients().apply(t.flatten()) == rhs_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Matrix> blocks_;
    Vector rhs_;
};

/// Adds "T intertwines both actions" for T: M -> N.
inline void add_intertwining(MatrixSystem& sys, const Bimodule& m, const Bimodule& n) {
    const Matrix im = Matrix::identity(m.dim);
    const Matrix in = Matrix::identity(n.dim);
    for (std::size_t i = 0; i < m.left.size(); ++i) {
        sys.add_homogeneous({{Rational(1), in, m.left[i]}, {Rational(-1), n.left[i], im}});
        sys.add_homogeneous({{Rational(1), in, m.right[i]}, {Rational(-1), n.right[i], im}});
    }
}

struct BimoduleMap {
    Bimodule source;
    Bimodule target;
    Matrix matrix;  // target.dim x source.dim

    [[nodiscard]] Vector operator()(const Vector& m) const { return matrix.apply(m); }
};

inline Report check_bimodule_map(const Algebra& a, const BimoduleMap& f) {
    Report r;
    if (f.matrix.rows() != f.target.dim || f.matrix.cols() != f.source.dim) {
        r.add("shape", {}, "map matrix does not match source and target dimensions");
        return r;
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const Matrix dl = f.target.left[i] * f.matrix - f.matrix * f.source.left[i];
        if (!dl.is_zero()) {
            r.add("map.left", {i}, "f=" + a.name(i), dl.flatten());
        }
        const Matrix dr = f.target.right[i] * f.matrix - f.matrix * f.source.right[i];
        if (!dr.is_zero()) {
            r.add("map.right", {i}, "f=" + a.name(i), dr.flatten());
        }
    }
    return r;
}

/// All bimodule maps M -> N, as flattened (N.dim x M.dim) matrices.
inline Subspace bimodule_map_space(const Bimodule& m, const Bimodule& n) {
    if (m.left.size() != n.left.size()) {
        throw UsageError("bimodules over different algebras");
    }
    MatrixSystem sys(n.dim, m.dim);
    add_intertwining(sys, m, n);
    return sys.homogeneous();
}

enum class Side { right, left };

/// Dual bimodule whose elements are realized as evaluation matrices M -> A (n x m).
struct DualBimodule {
    Side side = Side::right;
    Bimodule module;
    std::vector<Matrix> evaluations;
    Subspace span;  // flattened evaluations, canonical
    std::size_t algebra_dim = 0;
    std::size_t source_dim = 0;

    [[nodiscard]] std::size_t dim() const { return evaluations.size(); }

    [[nodiscard]] Matrix evaluation(const Vector& coords) const {
        return combine(evaluations, coords, algebra_dim, source_dim);
    }

    [[nodiscard]] std::optional<Vector> coordinates(const Matrix& eval) const { return span.coordinates(eval.flatten()); }

    /// Coordinates of an evaluation matrix known to lie in the dual.
    [[nodiscard]] Vector require_coordinates(const Matrix& eval) const {
        auto c = coordinates(eval);
        if (!c) {
            throw UsageError("map is not an element of the dual");
        }
        return *c;
    }
};

namespace detail {

inline DualBimodule build_dual(const Algebra& a, const Bimodule& m, Side side) {
    const std::size_t n = a.dim();
    DualBimodule d;
    d.side = side;
    d.algebra_dim = n;
    d.source_dim = m.dim;
    if (m.dim == 0) {
        d.span = Subspace(0);
        d.module = Bimodule::zero(a);
        return d;
    }
    MatrixSystem sys(n, m.dim);
    const Matrix in = Matrix::identity(n);
    const Matrix im = Matrix::identity(m.dim);
    for (std::size_t j = 0; j < n; ++j) {
        if (side == Side::right) {
            // X(m.e_j) = X(m) e_j
            sys.add_homogeneous({{Rational(1), in, m.right[j]}, {Rational(-1), a.right_mult(j), im}});
        } else {
            // X(e_j.m) = e_j X(m)
            sys.add_homogeneous({{Rational(1), in, m.left[j]}, {Rational(-1), a.left_mult(j), im}});
        }
    }
    d.span = sys.homogeneous();
    for (const auto& v : d.span.basis()) {
        d.evaluations.push_back(Matrix::from_flat(n, m.dim, v));
    }
    const std::size_t k = d.evaluations.size();
    d.module.dim = k;
    for (std::size_t i = 0; i < n; ++i) {
        Matrix l(k, k);
        Matrix r(k, k);
        for (std::size_t b = 0; b < k; ++b) {
            const Matrix& x = d.evaluations[b];
            if (side == Side::right) {
                // (f.X.g)(m) = f X(g.m)
                l.set_column(b, d.require_coordinates(a.left_mult(i) * x));
                r.set_column(b, d.require_coordinates(x * m.left[i]));
            } else {
                // (f.X.g)(m) = X(m.f) g
                l.set_column(b, d.require_coordinates(x * m.right[i]));
                r.set_column(b, d.require_coordinates(a.right_mult(i) * x));
            }
        }
        d.module.left.push_back(std::move(l));
        d.module.right.push_back(std::move(r));
    }
    return d;
}

}  // namespace detail

/// Right A-module maps M -> A with (f.X.g)(m) = f X(g.m).
inline DualBimodule right_dual(const Algebra& a, const Bimodule& m) { return detail::build_dual(a, m, Side::right); }

/// Left A-module maps M -> A with (f.X.g)(m) = X(m.f) g.
inline DualBimodule left_dual(const Algebra& a, const Bimodule& m) { return detail::build_dual(a, m, Side::left); }

/// <X, m> for X given by coordinates in the dual.
inline Vector pair(const DualBimodule& dual, const Vector& x, const Vector& m) { return dual.evaluation(x).apply(m); }

/// alpha^T : N* -> M*, Y -> Y o alpha. Duals must be taken on the same side.
inline BimoduleMap transpose(const BimoduleMap& alpha, const DualBimodule& source_dual, const DualBimodule& target_dual) {
    if (source_dual.side != target_dual.side) {
        throw UsageError("transpose needs duals of the same handedness");
    }
    if (source_dual.source_dim != alpha.source.dim || target_dual.source_dim != alpha.target.dim) {
        throw UsageError("duals do not match the map's source and target");
    }
    Matrix t(source_dual.dim(), target_dual.dim());
    for (std::size_t b = 0; b < target_dual.dim(); ++b) {
        t.set_column(b, source_dual.require_coordinates(target_dual.evaluations[b] * alpha.matrix));
    }
    return {target_dual.module, source_dual.module, std::move(t)};
}

inline BimoduleMap transpose(const Algebra& a, const BimoduleMap& alpha) {
    return transpose(alpha, right_dual(a, alpha.source), right_dual(a, alpha.target));
}

/// M (x)_A E as a quotient of M (x) E; basis index p*r + s stands for m_p (x) xi_s.
struct TensorProduct {
    LeftModule module;
    Quotient quotient;
    std::size_t bimodule_dim = 0;
    std::size_t module_dim = 0;

    [[nodiscard]] Vector element(const Vector& m, const Vector& xi) const {
        Vector raw = zero_vector(bimodule_dim * module_dim);
        for (std::size_t p = 0; p < bimodule_dim; ++p) {
            if (m[p].is_zero()) {
                continue;
            }
            for (std::size_t s = 0; s < module_dim; ++s) {
                if (!xi[s].is_zero()) {
                    raw[p * module_dim + s] = m[p] * xi[s];
                }
            }
        }
        return quotient.project(raw);
    }

    [[nodiscard]] const Matrix& projection() const { return quotient.projection(); }
};

inline TensorProduct tensor_over(const Algebra& a, const Bimodule& m, const LeftModule& e) {
    const std::size_t n = a.dim();
    const std::size_t r = e.dim;
    const std::size_t ambient = m.dim * r;
    std::vector<Vector> rels;
    for (std::size_t i = 0; i < n; ++i) {
        // (m.f) (x) xi - m (x) (f.xi) for basis m, f, xi
        const Matrix rel = kron(m.right[i], Matrix::identity(r)) - kron(Matrix::identity(m.dim), e.left[i]);
        for (std::size_t c = 0; c < ambient; ++c) {
            rels.push_back(rel.column(c));
        }
    }
    TensorProduct t;
    t.bimodule_dim = m.dim;
    t.module_dim = r;
    t.quotient = Quotient(Subspace::span(ambient, rels));
    t.module.dim = t.quotient.dim();
    for (std::size_t i = 0; i < n; ++i) {
        const Matrix act = kron(m.left[i], Matrix::identity(r));
        for (const auto& v : t.quotient.relations().basis()) {
            if (!t.quotient.relations().contains(act.apply(v))) {
                throw ValidationError("left action does not descend to the tensor product", {});
            }
        }
        t.module.left.push_back(t.quotient.projection() * act * t.quotient.lift());
    }
    return t;
}

/// The canonical map M -> *(M*), m -> (X -> X(m)), with both duals it passes through.
struct DoubleDual {
    DualBimodule right;
    DualBimodule left;
    BimoduleMap canonical;
};

inline DoubleDual double_dual(const Algebra& a, const Bimodule& m) {
    DoubleDual dd;
    dd.right = right_dual(a, m);
    dd.left = left_dual(a, dd.right.module);
    Matrix c(dd.left.dim(), m.dim);
    for (std::size_t p = 0; p < m.dim; ++p) {
        Matrix z(a.dim(), dd.right.dim());
        for (std::size_t b = 0; b < dd.right.dim(); ++b) {
            z.set_column(b, dd.right.evaluations[b].column(p));
        }
        c.set_column(p, dd.left.require_coordinates(z));
    }
    dd.canonical = {m, dd.left.module, std::move(c)};
    return dd;
}

/// For M = A regular: X -> X(1), an n x dim(A*) matrix.
inline Matrix evaluate_at_unit(const Algebra& a, const DualBimodule& dual) {
    Matrix out(a.dim(), dual.dim());
    for (std::size_t b = 0; b < dual.dim(); ++b) {
        out.set_column(b, dual.evaluations[b].apply(a.unit()));
    }
    return out;
}

}  // namespace ncwb
