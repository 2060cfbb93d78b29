#pragma once

#include "ncwb/rational.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ncwb {

/// Dense row-major matrix over the rationals. Zero-sized shapes are legal.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = Rational(1);
        }
        return m;
    }

    /// Rows given as nested lists; all rows must have equal length.
    static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) {
                throw UsageError("ragged matrix rows");
            }
            for (std::size_t c = 0; c < cols; ++c) {
                m(r, c) = rows[r][c];
            }
        }
        return m;
    }

    static Matrix from_columns(std::size_t rows, const std::vector<Vector>& cols) {
        Matrix m(rows, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            m.set_column(c, cols[c]);
        }
        return m;
    }

    /// Inverse of flatten().
    static Matrix from_flat(std::size_t rows, std::size_t cols, const Vector& flat) {
        if (flat.size() != rows * cols) {
            throw UsageError("flat vector does not match matrix shape");
        }
        Matrix m(rows, cols);
        m.data_ = flat;
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] Vector column(std::size_t c) const {
        Vector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            v[r] = (*this)(r, c);
        }
        return v;
    }

    [[nodiscard]] Vector row(std::size_t r) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    void set_column(std::size_t c, const Vector& v) {
        if (v.size() != rows_) {
            throw UsageError("column length mismatch");
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            (*this)(r, c) = v[r];
        }
    }

    /// Row-major coordinates; End-space elements are handled as flattened vectors.
    [[nodiscard]] const Vector& flatten() const { return data_; }

    [[nodiscard]] bool is_zero() const { return ncwb::is_zero(data_); }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                t(c, r) = (*this)(r, c);
            }
        }
        return t;
    }

    [[nodiscard]] Vector apply(const Vector& v) const {
        if (v.size() != cols_) {
            throw UsageError("matrix-vector dimension mismatch");
        }
        Vector out(rows_, Rational(0));
        for (std::size_t c = 0; c < cols_; ++c) {
            if (v[c].is_zero()) {
                continue;
            }
            for (std::size_t r = 0; r < rows_; ++r) {
                const auto& a = (*this)(r, c);
                if (!a.is_zero()) {
                    out[r].add_mul(a, v[c]);
                }
            }
        }
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw UsageError("matrix product dimension mismatch");
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& x = a(r, k);
                if (x.is_zero()) {
                    continue;
                }
                for (std::size_t c = 0; c < b.cols_; ++c) {
                    const auto& y = b(k, c);
                    if (!y.is_zero()) {
                        out(r, c).add_mul(x, y);
                    }
                }
            }
        }
        return out;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        a.require_same_shape(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            a.data_[i] += b.data_[i];
        }
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b) {
        a.require_same_shape(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            a.data_[i] -= b.data_[i];
        }
        return a;
    }

    friend Matrix operator*(const Rational& s, Matrix m) {
        for (auto& x : m.data_) {
            x *= s;
        }
        return m;
    }

    /// this += s * other
    void add_scaled(const Rational& s, const Matrix& other) {
        require_same_shape(other);
        if (s.is_zero()) {
            return;
        }
        for (std::size_t i = 0; i < data_.size(); ++i) {
            if (!other.data_[i].is_zero()) {
                data_[i].add_mul(s, other.data_[i]);
            }
        }
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void require_same_shape(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) {
            throw UsageError("matrix shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

inline std::string to_string(const Matrix& m) {
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += (r == 0 ? "" : ", ") + to_string(m.row(r));
    }
    return out + "]";
}

/// Linear combination sum_i coeffs[i] * mats[i]; all mats share the given shape.
inline Matrix combine(std::span<const Matrix> mats, const Vector& coeffs, std::size_t rows, std::size_t cols) {
    if (mats.size() != coeffs.size()) {
        throw UsageError("coefficient count does not match matrix count");
    }
    Matrix out(rows, cols);
    for (std::size_t i = 0; i < mats.size(); ++i) {
        out.add_scaled(coeffs[i], mats[i]);
    }
    return out;
}

/// Kronecker product. With row-major flattening, vec(A X B) = kron(A, B^T) vec(X).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto& x = a(i, j);
            if (x.is_zero()) {
                continue;
            }
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    if (!b(k, l).is_zero()) {
                        out(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
                    }
                }
            }
        }
    }
    return out;
}

/// Matrix of X -> A X B acting on row-major vec(X).
inline Matrix sandwich_operator(const Matrix& left, const Matrix& right) { return kron(left, right.transpose()); }

/// Stack blocks vertically; all blocks must share the column count.
inline Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols) {
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) {
            throw UsageError("vstack column mismatch");
        }
        rows += b.rows();
    }
    Matrix out(rows, cols);
    std::size_t at = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r, ++at) {
            for (std::size_t c = 0; c < cols; ++c) {
                out(at, c) = b(r, c);
            }
        }
    }
    return out;
}

struct RowEchelon {
    Matrix reduced;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row, increasing
};

/// Reduced row echelon form by Gauss-Jordan elimination.
inline RowEchelon rref(Matrix m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col).is_zero()) {
            ++sel;
        }
        if (sel == m.rows()) {
            continue;
        }
        if (sel != row) {
            for (std::size_t c = col; c < m.cols(); ++c) {
                std::swap(m(sel, c), m(row, c));
            }
        }
        const Rational inv = Rational(1) / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) {
            if (!m(row, c).is_zero()) {
                m(row, c) *= inv;
            }
        }
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col).is_zero()) {
                continue;
            }
            const Rational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) {
                if (!m(row, c).is_zero()) {
                    m(r, c).sub_mul(f, m(row, c));
                }
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// Finite-dimensional subspace of Q^ambient, canonicalized by its reduced echelon basis.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    static Subspace span(std::size_t ambient, const std::vector<Vector>& vectors) {
        for (const auto& v : vectors) {
            if (v.size() != ambient) {
                throw UsageError("spanning vector has wrong length");
            }
        }
        Subspace s(ambient);
        if (vectors.empty()) {
            return s;
        }
        auto [reduced, pivots] = rref(Matrix::from_rows(vectors, ambient));
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            s.basis_.push_back(reduced.row(r));
        }
        s.pivots_ = std::move(pivots);
        return s;
    }

    static Subspace full(std::size_t ambient) {
        std::vector<Vector> e;
        for (std::size_t i = 0; i < ambient; ++i) {
            e.push_back(unit_vector(ambient, i));
        }
        return span(ambient, e);
    }

    [[nodiscard]] std::size_t ambient_dim() const { return ambient_; }
    [[nodiscard]] std::size_t dim() const { return basis_.size(); }
    [[nodiscard]] const std::vector<Vector>& basis() const { return basis_; }
    [[nodiscard]] const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// v minus its component along the echelon basis; zero at every pivot column.
    [[nodiscard]] Vector reduce(Vector v) const {
        check_length(v);
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            const Rational f = v[pivots_[k]];
            if (f.is_zero()) {
                continue;
            }
            for (std::size_t c = 0; c < ambient_; ++c) {
                if (!basis_[k][c].is_zero()) {
                    v[c].sub_mul(f, basis_[k][c]);
                }
            }
        }
        return v;
    }

    [[nodiscard]] bool contains(const Vector& v) const { return ncwb::is_zero(reduce(v)); }

    /// Coordinates with respect to basis(), or nullopt when v lies outside.
    [[nodiscard]] std::optional<Vector> coordinates(const Vector& v) const {
        if (!contains(v)) {
            return std::nullopt;
        }
        Vector c(basis_.size());
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            c[k] = v[pivots_[k]];
        }
        return c;
    }

    [[nodiscard]] Vector combination(const Vector& coords) const {
        if (coords.size() != basis_.size()) {
            throw UsageError("coordinate count does not match subspace dimension");
        }
        Vector v = zero_vector(ambient_);
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            if (coords[k].is_zero()) {
                continue;
            }
            for (std::size_t c = 0; c < ambient_; ++c) {
                if (!basis_[k][c].is_zero()) {
                    v[c].add_mul(coords[k], basis_[k][c]);
                }
            }
        }
        return v;
    }

    /// Basis vectors as columns: ambient x dim.
    [[nodiscard]] Matrix basis_matrix() const { return Matrix::from_columns(ambient_, basis_); }

    [[nodiscard]] Subspace operator+(const Subspace& other) const {
        require_same_ambient(other);
        auto all = basis_;
        all.insert(all.end(), other.basis_.begin(), other.basis_.end());
        return span(ambient_, all);
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        a.require_same_ambient(b);
        return a.basis_ == b.basis_;
    }

private:
    void check_length(const Vector& v) const {
        if (v.size() != ambient_) {
            throw UsageError("vector length does not match subspace ambient dimension");
        }
    }
    void require_same_ambient(const Subspace& other) const {
        if (ambient_ != other.ambient_) {
            throw UsageError("subspaces live in different ambient spaces");
        }
    }

    std::size_t ambient_ = 0;
    std::vector<Vector> basis_;
    std::vector<std::size_t> pivots_;
};

inline bool subspace_equal(const Subspace& u, const Subspace& v) { return u == v; }

/// x with A x = b, or nullopt when the system is inconsistent.
inline std::optional<Vector> solve(const Matrix& a, const Vector& b) {
    if (b.size() != a.rows()) {
        throw UsageError("right-hand side length does not match row count");
    }
    Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            aug(r, c) = a(r, c);
        }
        aug(r, a.cols()) = b[r];
    }
    auto [reduced, pivots] = rref(std::move(aug));
    if (!pivots.empty() && pivots.back() == a.cols()) {
        return std::nullopt;
    }
    Vector x = zero_vector(a.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        x[pivots[r]] = reduced(r, a.cols());
    }
    return x;
}

inline Subspace kernel(const Matrix& a) {
    auto [reduced, pivots] = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<Vector> vecs;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) {
            continue;
        }
        Vector x = zero_vector(a.cols());
        x[f] = Rational(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            x[pivots[r]] = -reduced(r, f);
        }
        vecs.push_back(std::move(x));
    }
    return Subspace::span(a.cols(), vecs);
}

/// Solution set {particular + h : h in homogeneous} of A x = b.
struct AffineSolution {
    Vector particular;  // free variables set to zero
    Subspace homogeneous;
};

inline std::optional<AffineSolution> solve_affine(const Matrix& a, const Vector& b) {
    auto x = solve(a, b);
    if (!x) {
        return std::nullopt;
    }
    return AffineSolution{std::move(*x), kernel(a)};
}

/// Incremental independence test over a semi-echelon basis; keeps insertion order.
class EchelonBuilder {
public:
    explicit EchelonBuilder(std::size_t ambient) : ambient_(ambient) {}

    /// Adds v if it is independent of what is already held; returns whether it was added.
    bool insert(const Vector& v) {
        if (v.size() != ambient_) {
            throw UsageError("vector length does not match ambient dimension");
        }
        Vector w = v;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Rational f = w[pivots_[k]];
            if (f.is_zero()) {
                continue;
            }
            for (std::size_t c = 0; c < ambient_; ++c) {
                if (!rows_[k][c].is_zero()) {
                    w[c].sub_mul(f, rows_[k][c]);
                }
            }
        }
        std::size_t p = 0;
        while (p < ambient_ && w[p].is_zero()) {
            ++p;
        }
        if (p == ambient_) {
            return false;
        }
        const Rational inv = Rational(1) / w[p];
        for (auto& x : w) {
            if (!x.is_zero()) {
                x *= inv;
            }
        }
        rows_.push_back(std::move(w));
        pivots_.push_back(p);
        accepted_.push_back(v);
        return true;
    }

    [[nodiscard]] std::size_t dim() const { return rows_.size(); }
    /// The inserted vectors that were accepted, in insertion order.
    [[nodiscard]] const std::vector<Vector>& accepted() const { return accepted_; }
    [[nodiscard]] Subspace subspace() const { return Subspace::span(ambient_, rows_); }

private:
    std::size_t ambient_;
    std::vector<Vector> rows_;
    std::vector<std::size_t> pivots_;
    std::vector<Vector> accepted_;
};

using BilinearStep = std::function<Vector(const Vector&, const Vector&)>;

/// Smallest subspace containing seed and closed under a bilinear step.
/// Each round either adds a new independent vector or terminates.
inline Subspace span_closure(std::size_t ambient, const std::vector<Vector>& seed, const BilinearStep& step) {
    EchelonBuilder b(ambient);
    for (const auto& v : seed) {
        b.insert(v);
    }
    // Pairs (i, k) with i <= k are processed once k enters; new vectors extend the frontier.
    for (std::size_t k = 0; k < b.dim(); ++k) {
        for (std::size_t i = 0; i <= k; ++i) {
            const Vector u = b.accepted()[i];
            const Vector v = b.accepted()[k];
            b.insert(step(u, v));
            if (i != k) {
                b.insert(step(v, u));
            }
        }
    }
    return b.subspace();
}

/// Smallest subspace containing seed and invariant under each linear operator.
inline Subspace invariant_closure(std::size_t ambient, const std::vector<Vector>& seed,
                                  const std::vector<Matrix>& operators) {
    EchelonBuilder b(ambient);
    for (const auto& v : seed) {
        b.insert(v);
    }
    for (std::size_t k = 0; k < b.dim(); ++k) {
        const Vector v = b.accepted()[k];
        for (const auto& op : operators) {
            b.insert(op.apply(v));
        }
    }
    return b.subspace();
}

/// Canonical quotient Q^ambient / relations: coordinates are the non-pivot columns.
class Quotient {
public:
    Quotient() = default;
    explicit Quotient(Subspace relations) : relations_(std::move(relations)) {
        const std::size_t n = relations_.ambient_dim();
        std::vector<bool> is_pivot(n, false);
        for (auto p : relations_.pivots()) {
            is_pivot[p] = true;
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (!is_pivot[c]) {
                free_.push_back(c);
            }
        }
        projection_ = Matrix(free_.size(), n);
        lift_ = Matrix(n, free_.size());
        for (std::size_t c = 0; c < n; ++c) {
            const Vector r = relations_.reduce(unit_vector(n, c));
            for (std::size_t t = 0; t < free_.size(); ++t) {
                projection_(t, c) = r[free_[t]];
            }
        }
        for (std::size_t t = 0; t < free_.size(); ++t) {
            lift_(free_[t], t) = Rational(1);
        }
    }

    [[nodiscard]] std::size_t dim() const { return free_.size(); }
    [[nodiscard]] std::size_t ambient_dim() const { return relations_.ambient_dim(); }
    [[nodiscard]] const Subspace& relations() const { return relations_; }
    /// dim x ambient
    [[nodiscard]] const Matrix& projection() const { return projection_; }
    /// ambient x dim; projection * lift = identity
    [[nodiscard]] const Matrix& lift() const { return lift_; }
    [[nodiscard]] Vector project(const Vector& v) const { return projection_.apply(v); }

private:
    Subspace relations_;
    std::vector<std::size_t> free_;
    Matrix projection_;
    Matrix lift_;
};

}  // namespace ncwb
