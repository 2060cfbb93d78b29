#pragma once

#include "ncwb/linalg.hpp"
#include "ncwb/report.hpp"

#include <string>
#include <vector>

namespace ncwb {

/// Raw description of a finite-dimensional algebra: e_i * e_j = sum_k table[i][j][k] e_k.
struct StructureConstants {
    std::vector<std::string> basis_names;
    std::vector<std::vector<Vector>> table;
    Vector unit;

    [[nodiscard]] std::size_t dim() const { return basis_names.size(); }
};

namespace detail {

inline Vector raw_product(const StructureConstants& sc, const Vector& f, const Vector& g) {
    const std::size_t n = sc.dim();
    Vector out = zero_vector(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (g[j].is_zero()) {
                continue;
            }
            const Rational w = f[i] * g[j];
            const Vector& c = sc.table[i][j];
            for (std::size_t k = 0; k < n; ++k) {
                if (!c[k].is_zero()) {
                    out[k].add_mul(w, c[k]);
                }
            }
        }
    }
    return out;
}

inline Report check_shape(const StructureConstants& sc) {
    Report r;
    const std::size_t n = sc.dim();
    if (sc.unit.size() != n) {
        r.add("shape", {}, "unit has " + std::to_string(sc.unit.size()) + " coordinates, expected " + std::to_string(n));
    }
    if (sc.table.size() != n) {
        r.add("shape", {}, "structure table has wrong row count");
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (sc.table[i].size() != n) {
            r.add("shape", {i}, "structure table row " + std::to_string(i) + " has wrong length");
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (sc.table[i][j].size() != n) {
                r.add("shape", {i, j}, "product e_i e_j has wrong coordinate count");
            }
        }
    }
    return r;
}

}  // namespace detail

/// Exhaustive associativity and unit-law check. Lists every failing triple.
inline Report check_algebra(const StructureConstants& sc) {
    Report r = detail::check_shape(sc);
    if (!r.ok()) {
        return r;
    }
    const std::size_t n = sc.dim();
    const auto& name = sc.basis_names;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t l = 0; l < n; ++l) {
                const Vector left = detail::raw_product(sc, sc.table[i][j], unit_vector(n, l));
                const Vector right = detail::raw_product(sc, unit_vector(n, i), sc.table[j][l]);
                if (left != right) {
                    r.add("associativity", {i, j, l}, "(" + name[i] + "*" + name[j] + ")*" + name[l], right - left);
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vector e = unit_vector(n, i);
        const Vector ue = detail::raw_product(sc, sc.unit, e);
        const Vector eu = detail::raw_product(sc, e, sc.unit);
        if (ue != e) {
            r.add("unit.left", {i}, "1*" + name[i], e - ue);
        }
        if (eu != e) {
            r.add("unit.right", {i}, name[i] + "*1", e - eu);
        }
    }
    return r;
}

/// Validated unital associative algebra over Q. Immutable after construction.
class Algebra {
public:
    /// Throws ValidationError carrying the check_algebra report when the constants are invalid.
    explicit Algebra(StructureConstants sc) : sc_(std::move(sc)) {
        Report r = check_algebra(sc_);
        if (!r.ok()) {
            throw ValidationError("structure constants do not define a unital associative algebra", std::move(r));
        }
        const std::size_t n = dim();
        for (std::size_t i = 0; i < n; ++i) {
            Matrix l(n, n);
            Matrix rm(n, n);
            for (std::size_t j = 0; j < n; ++j) {
                l.set_column(j, sc_.table[i][j]);
                rm.set_column(j, sc_.table[j][i]);
            }
            left_.push_back(std::move(l));
            right_.push_back(std::move(rm));
        }
        mult_ = Matrix(n, n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                mult_.set_column(i * n + j, sc_.table[i][j]);
            }
        }
    }

    [[nodiscard]] std::size_t dim() const { return sc_.dim(); }
    [[nodiscard]] const std::vector<std::string>& basis_names() const { return sc_.basis_names; }
    [[nodiscard]] const std::string& name(std::size_t i) const { return sc_.basis_names.at(i); }
    [[nodiscard]] const Vector& unit() const { return sc_.unit; }
    [[nodiscard]] Vector basis(std::size_t i) const { return unit_vector(dim(), i); }
    [[nodiscard]] const StructureConstants& constants() const { return sc_; }

    [[nodiscard]] Vector multiply(const Vector& f, const Vector& g) const {
        if (f.size() != dim() || g.size() != dim()) {
            throw UsageError("element does not belong to this algebra");
        }
        return detail::raw_product(sc_, f, g);
    }

    /// Matrix of g -> e_i g.
    [[nodiscard]] const Matrix& left_mult(std::size_t i) const { return left_.at(i); }
    /// Matrix of f -> f e_i.
    [[nodiscard]] const Matrix& right_mult(std::size_t i) const { return right_.at(i); }
    [[nodiscard]] Matrix left_mult(const Vector& f) const { return combine(left_, f, dim(), dim()); }
    [[nodiscard]] Matrix right_mult(const Vector& g) const { return combine(right_, g, dim(), dim()); }

    /// Multiplication A (x) A -> A; column i*n + j holds e_i e_j.
    [[nodiscard]] const Matrix& mult_map() const { return mult_; }

    [[nodiscard]] bool is_commutative() const {
        for (std::size_t i = 0; i < dim(); ++i) {
            for (std::size_t j = i + 1; j < dim(); ++j) {
                if (sc_.table[i][j] != sc_.table[j][i]) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Renders coordinates as a sum over basis names, e.g. "2*x - 1/2*y".
    [[nodiscard]] std::string format(const Vector& f) const {
        std::string out;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i].is_zero()) {
                continue;
            }
            Rational c = f[i];
            if (out.empty()) {
                if (c.sign() < 0) {
                    out += "-";
                    c = -c;
                }
            } else {
                out += c.sign() < 0 ? " - " : " + ";
                if (c.sign() < 0) {
                    c = -c;
                }
            }
            out += c == Rational(1) ? name(i) : c.to_string() + "*" + name(i);
        }
        return out.empty() ? "0" : out;
    }

private:
    StructureConstants sc_;
    std::vector<Matrix> left_;
    std::vector<Matrix> right_;
    Matrix mult_;
};

}  // namespace ncwb
