#pragma once

#include "ncwb/connections.hpp"

#include <string>
#include <vector>

namespace ncwb {

/// A validated example: algebra, calculus, its derived pair and the trivial connection on A.
struct ExampleBundle {
    std::string name;
    std::vector<Rational> params;
    Algebra algebra;
    DifferentialCalculus calculus;
    CartanPair pair;
    Connection connection;
    std::vector<std::string> notes;
};

namespace detail {

inline StructureConstants empty_constants(std::vector<std::string> names) {
    StructureConstants sc;
    const std::size_t n = names.size();
    sc.basis_names = std::move(names);
    sc.table.assign(n, std::vector<Vector>(n, zero_vector(n)));
    sc.unit = zero_vector(n);
    return sc;
}

inline std::string power_name(const std::string& var, std::size_t k) {
    if (k == 0) {
        return "";
    }
    return k == 1 ? var : var + "^" + std::to_string(k);
}

inline std::size_t integer_param(const std::vector<Rational>& params, std::size_t k, long fallback, long lo,
                                 const std::string& what) {
    if (k >= params.size()) {
        return static_cast<std::size_t>(fallback);
    }
    const Rational& p = params[k];
    if (!p.is_integer() || p < Rational(lo) || p > Rational(64)) {
        throw UsageError(what + " must be an integer between " + std::to_string(lo) + " and 64");
    }
    return static_cast<std::size_t>(p.raw().get_num().get_si());
}

inline ExampleBundle assemble(std::string name, std::vector<Rational> params, const Algebra& a, Bimodule m,
                              Matrix differential, std::vector<std::string> notes) {
    DifferentialCalculus c{std::move(m), std::move(differential)};
    CartanPair p = pair_from_calculus(a, c).pair;
    Connection conn = trivial_connection(a, c, 1);
    return {std::move(name), std::move(params), a, std::move(c), std::move(p), std::move(conn), std::move(notes)};
}

}  // namespace detail

/// k[x]/(x^N), basis 1, x, ..., x^{N-1}.
inline Algebra truncated_poly_algebra(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < n; ++k) {
        names.push_back(k == 0 ? "1" : detail::power_name("x", k));
    }
    StructureConstants sc = detail::empty_constants(std::move(names));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; i + j < n; ++j) {
            sc.table[i][j][i + j] = Rational(1);
        }
    }
    sc.unit[0] = Rational(1);
    return Algebra(std::move(sc));
}

/// Kaehler-style calculus on k[x]/(x^N): M has basis x^k dx for k <= N-2 and d(x^k) = k x^{k-1} dx.
inline DifferentialCalculus kaehler_calculus(const Algebra& a) {
    const std::size_t n = a.dim();
    const std::size_t m = n == 0 ? 0 : n - 1;
    Bimodule mod;
    mod.dim = m;
    for (std::size_t k = 0; k < m; ++k) {
        const std::string p = detail::power_name("x", k);
        mod.basis_names.push_back(p.empty() ? "dx" : p + "*dx");
    }
    for (std::size_t i = 0; i < n; ++i) {
        Matrix act(m, m);
        for (std::size_t k = 0; i + k < m; ++k) {
            act(i + k, k) = Rational(1);
        }
        mod.left.push_back(act);
        mod.right.push_back(act);
    }
    Matrix d(m, n);
    for (std::size_t k = 1; k < n; ++k) {
        d(k - 1, k) = Rational(static_cast<long>(k));
    }
    return {std::move(mod), std::move(d)};
}

inline ExampleBundle truncated_poly(std::size_t n) {
    if (n < 1) {
        throw UsageError("truncated_poly needs N >= 1");
    }
    Algebra a = truncated_poly_algebra(n);
    DifferentialCalculus c = kaehler_calculus(a);
    std::string name = "truncated_poly";
    return detail::assemble(name, {Rational(static_cast<long>(n))}, a, std::move(c.module), std::move(c.differential),
                            {"k[x]/(x^" + std::to_string(n) + ")", "module A.dx with x^" + std::to_string(n - 1) +
                                                                        ".dx = 0, d(x^k) = k x^(k-1) dx"});
}

inline ExampleBundle dual_numbers() {
    ExampleBundle b = truncated_poly(2);
    b.name = "dual_numbers";
    b.params.clear();
    b.notes = {"k[x]/(x^2)", "Kaehler calculus: module spanned by dx with x.dx = dx.x = 0, d(x) = dx"};
    return b;
}

/// k[Z/2], basis 1, g with g^2 = 1.
inline Algebra group_algebra_z2_algebra() {
    StructureConstants sc = detail::empty_constants({"1", "g"});
    sc.table[0][0][0] = Rational(1);
    sc.table[0][1][1] = Rational(1);
    sc.table[1][0][1] = Rational(1);
    sc.table[1][1][0] = Rational(1);
    sc.unit[0] = Rational(1);
    return Algebra(std::move(sc));
}

inline ExampleBundle group_algebra_z2() {
    Algebra a = group_algebra_z2_algebra();
    return detail::assemble("group_algebra_z2", {}, a, Bimodule::regular(a), Matrix(2, 2),
                            {"k[Z/2]", "regular bimodule with d = 0; the algebra is separable so every symmetric "
                                       "calculus vanishes"});
}

/// Matrix units E_rc of the given size; when `upper` only r <= c are kept.
inline Algebra matrix_unit_algebra(std::size_t size, bool upper) {
    std::vector<std::pair<std::size_t, std::size_t>> units;
    std::vector<std::string> names;
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = upper ? r : 0; c < size; ++c) {
            units.emplace_back(r, c);
            names.push_back("E" + std::to_string(r + 1) + std::to_string(c + 1));
        }
    }
    StructureConstants sc = detail::empty_constants(std::move(names));
    for (std::size_t i = 0; i < units.size(); ++i) {
        for (std::size_t j = 0; j < units.size(); ++j) {
            if (units[i].second != units[j].first) {
                continue;
            }
            const std::pair<std::size_t, std::size_t> prod{units[i].first, units[j].second};
            for (std::size_t k = 0; k < units.size(); ++k) {
                if (units[k] == prod) {
                    sc.table[i][j][k] = Rational(1);
                }
            }
        }
        if (units[i].first == units[i].second) {
            sc.unit[i] = Rational(1);
        }
    }
    return Algebra(std::move(sc));
}

/// Inner calculus on the regular bimodule: df = u f - f u.
inline DifferentialCalculus inner_calculus(const Algebra& a, const Vector& u) {
    Matrix d = a.left_mult(u) - a.right_mult(u);
    return {Bimodule::regular(a), std::move(d)};
}

inline ExampleBundle matrix_example(const std::string& name, std::size_t size, bool upper) {
    Algebra a = matrix_unit_algebra(size, upper);
    const Vector u = a.basis(1);  // E12 in both orderings
    DifferentialCalculus c = inner_calculus(a, u);
    return detail::assemble(name, {}, a, std::move(c.module), std::move(c.differential),
                            {std::string(upper ? "upper triangular" : "full") + " 2x2 matrices",
                             "inner calculus on the regular bimodule, df = E12 f - f E12"});
}

inline ExampleBundle upper_triangular_2() { return matrix_example("upper_triangular_2", 2, true); }
inline ExampleBundle matrix_2() { return matrix_example("matrix_2", 2, false); }

/// Monomials x^a y^b with a + b <= D, ordered by total degree then decreasing a.
inline std::vector<std::pair<std::size_t, std::size_t>> quantum_plane_monomials(std::size_t top) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t t = 0; t <= top; ++t) {
        for (std::size_t a = t + 1; a-- > 0;) {
            out.emplace_back(a, t - a);
        }
    }
    return out;
}

/// y x = q x y, truncated above total degree D.
inline Algebra quantum_plane_algebra(const Rational& q, std::size_t top) {
    const auto mons = quantum_plane_monomials(top);
    std::vector<std::string> names;
    for (const auto& [a, b] : mons) {
        const std::string s = detail::power_name("x", a) + detail::power_name("y", b);
        names.push_back(s.empty() ? "1" : s);
    }
    StructureConstants sc = detail::empty_constants(std::move(names));
    auto index_of = [&mons](std::size_t a, std::size_t b) {
        return static_cast<std::size_t>(std::find(mons.begin(), mons.end(), std::pair{a, b}) - mons.begin());
    };
    for (std::size_t i = 0; i < mons.size(); ++i) {
        for (std::size_t j = 0; j < mons.size(); ++j) {
            const auto [a, b] = mons[i];
            const auto [c, d] = mons[j];
            if (a + b + c + d > top) {
                continue;
            }
            Rational coef(1);
            for (std::size_t k = 0; k < b * c; ++k) {
                coef *= q;
            }
            sc.table[i][j][index_of(a + c, b + d)] = coef;
        }
    }
    sc.unit[0] = Rational(1);
    return Algebra(std::move(sc));
}

/// Twisted calculus on A: f.m.g = f m sigma(g) with sigma = q^degree, and d = sigma - id.
inline DifferentialCalculus twisted_calculus(const Algebra& a, const Rational& q, std::size_t top) {
    const auto mons = quantum_plane_monomials(top);
    Matrix sigma(a.dim(), a.dim());
    for (std::size_t k = 0; k < mons.size(); ++k) {
        Rational s(1);
        for (std::size_t e = 0; e < mons[k].first + mons[k].second; ++e) {
            s *= q;
        }
        sigma(k, k) = s;
    }
    Bimodule m;
    m.dim = a.dim();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        m.left.push_back(a.left_mult(i));
        m.right.push_back(a.right_mult(sigma.column(i)));
        m.basis_names.push_back("[" + a.name(i) + "]");
    }
    return {std::move(m), sigma - Matrix::identity(a.dim())};
}

inline ExampleBundle quantum_plane_trunc(const Rational& q, std::size_t top) {
    Algebra a = quantum_plane_algebra(q, top);
    DifferentialCalculus c = twisted_calculus(a, q, top);
    return detail::assemble("quantum_plane_trunc", {q, Rational(static_cast<long>(top))}, a, std::move(c.module),
                            std::move(c.differential),
                            {"y x = " + q.to_string() + " x y, monomials of total degree <= " + std::to_string(top),
                             "twisted calculus: f.m.g = f m sigma(g), sigma = q^degree, d = sigma - id"});
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"dual_numbers", "truncated_poly", "group_algebra_z2",
                                                "upper_triangular_2", "matrix_2", "quantum_plane_trunc"};
    return names;
}

/// Throws UsageError for an unknown name or bad parameters.
inline ExampleBundle builtin(const std::string& name, const std::vector<Rational>& params = {}) {
    auto no_params = [&] {
        if (!params.empty()) {
            throw UsageError(name + " takes no parameters");
        }
    };
    if (name == "dual_numbers") {
        no_params();
        return dual_numbers();
    }
    if (name == "truncated_poly") {
        if (params.size() > 1) {
            throw UsageError("truncated_poly takes one parameter N");
        }
        return truncated_poly(detail::integer_param(params, 0, 3, 1, "N"));
    }
    if (name == "group_algebra_z2") {
        no_params();
        return group_algebra_z2();
    }
    if (name == "upper_triangular_2") {
        no_params();
        return upper_triangular_2();
    }
    if (name == "matrix_2") {
        no_params();
        return matrix_2();
    }
    if (name == "quantum_plane_trunc") {
        if (params.size() > 2) {
            throw UsageError("quantum_plane_trunc takes parameters q and D");
        }
        const Rational q = params.empty() ? Rational(2) : params[0];
        return quantum_plane_trunc(q, detail::integer_param(params, 1, 2, 0, "D"));
    }
    throw UsageError("unknown builtin '" + name + "'");
}

/// Planted failures. Each is expected to be rejected by the matching checker.
namespace fixtures {

/// A regular, X_h(f) = h f'. Breaks the product rule exactly where degrees add up to N.
inline CartanPair naive_derivative_pair(const Algebra& a) {
    const std::size_t n = a.dim();
    CartanPair p{Bimodule::regular(a), {}};
    Matrix deriv(n, n);
    for (std::size_t k = 1; k < n; ++k) {
        deriv(k - 1, k) = Rational(static_cast<long>(k));
    }
    for (std::size_t h = 0; h < n; ++h) {
        p.action.push_back(a.left_mult(h) * deriv);
    }
    return p;
}

/// Dual numbers with N = span{X0}, trivial actions, and X0(1) = x.
inline CartanPair vacuum_violation(const Algebra& dual_numbers) {
    CartanPair p;
    p.module.dim = 1;
    p.module.basis_names = {"X0"};
    p.module.left = {Matrix::identity(1), Matrix(1, 1)};
    p.module.right = {Matrix::identity(1), Matrix(1, 1)};
    Matrix act(2, 2);
    act(1, 0) = Rational(1);
    p.action.push_back(act);
    (void)dual_numbers;
    return p;
}

/// The dual-numbers calculus with d(1) = dx planted.
inline DifferentialCalculus leibniz_violation(const Algebra& dual_numbers) {
    DifferentialCalculus c = kaehler_calculus(dual_numbers);
    c.differential(0, 0) = Rational(1);
    return c;
}

/// nabla = 0 on E = A over a calculus with d != 0.
inline Connection zero_connection(const Algebra& a, const DifferentialCalculus& c) {
    Connection conn = trivial_connection(a, c, 1);
    conn.nabla = Matrix(conn.nabla.rows(), conn.nabla.cols());
    return conn;
}

}  // namespace fixtures

}  // namespace ncwb
