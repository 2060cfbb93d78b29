#pragma once

#include "ncwb/cartan.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace ncwb {

enum class LetterKind : unsigned char { algebra, module };

/// A basis letter of the free product A * T(M): either e_i or X_a.
struct Letter {
    LetterKind kind = LetterKind::algebra;
    std::size_t index = 0;

    friend auto operator<=>(const Letter&, const Letter&) = default;
    friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

/// Finite linear combination of words; zero coefficients are never stored.
class FreeWord {
public:
    FreeWord() = default;

    void add(const Word& w, const Rational& c) {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    [[nodiscard]] const std::map<Word, Rational>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    [[nodiscard]] std::size_t max_length() const {
        std::size_t m = 0;
        for (const auto& [w, c] : terms_) {
            m = std::max(m, w.size());
        }
        return m;
    }

    FreeWord& operator+=(const FreeWord& o) {
        for (const auto& [w, c] : o.terms_) {
            add(w, c);
        }
        return *this;
    }
    friend FreeWord operator+(FreeWord a, const FreeWord& b) { return a += b; }
    friend FreeWord operator-(FreeWord a, const FreeWord& b) {
        for (const auto& [w, c] : b.terms_) {
            a.add(w, -c);
        }
        return a;
    }
    friend FreeWord operator*(const Rational& s, const FreeWord& w) {
        FreeWord out;
        for (const auto& [word, c] : w.terms_) {
            out.add(word, s * c);
        }
        return out;
    }
    friend bool operator==(const FreeWord&, const FreeWord&) = default;

private:
    std::map<Word, Rational> terms_;
};

/// Word calculus in A * T(M). Words are kept canonical: A-letters never sit next to each
/// other, and the basis element chosen to carry the unit (unit_pivot) never appears, since
/// the unit of A is identified with the empty word.
class FreeProduct {
public:
    FreeProduct(const Algebra& a, std::size_t module_dim, std::vector<std::string> module_names = {})
        : algebra_(&a), module_dim_(module_dim), module_names_(std::move(module_names)) {
        pivot_ = a.dim();
        for (std::size_t i = 0; i < a.dim(); ++i) {
            if (!a.unit()[i].is_zero()) {
                pivot_ = i;
                break;
            }
        }
        if (pivot_ == a.dim()) {
            throw UsageError("algebra has a zero unit");
        }
    }

    [[nodiscard]] const Algebra& algebra() const { return *algebra_; }
    [[nodiscard]] std::size_t module_dim() const { return module_dim_; }
    [[nodiscard]] std::size_t unit_pivot() const { return pivot_; }

    [[nodiscard]] FreeWord unit() const {
        FreeWord w;
        w.add({}, Rational(1));
        return w;
    }

    /// f = alpha*1 + sum_{j != pivot} beta_j e_j as a combination of (at most one-letter) words.
    [[nodiscard]] FreeWord algebra_element(const Vector& f) const {
        const Vector& u = algebra_->unit();
        const Rational alpha = f.at(pivot_) / u[pivot_];
        FreeWord w;
        w.add({}, alpha);
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (j == pivot_) {
                continue;
            }
            Rational beta = f[j];
            beta.sub_mul(alpha, u[j]);
            w.add({Letter{LetterKind::algebra, j}}, beta);
        }
        return w;
    }

    [[nodiscard]] FreeWord module_element(const Vector& x) const {
        if (x.size() != module_dim_) {
            throw UsageError("module element has wrong dimension");
        }
        FreeWord w;
        for (std::size_t a = 0; a < x.size(); ++a) {
            w.add({Letter{LetterKind::module, a}}, x[a]);
        }
        return w;
    }

    [[nodiscard]] FreeWord letter(const Letter& l) const {
        if (l.kind == LetterKind::algebra) {
            return algebra_element(algebra_->basis(l.index));
        }
        return module_element(unit_vector(module_dim_, l.index));
    }

    /// The product of a raw letter sequence, brought to canonical form.
    [[nodiscard]] FreeWord from_letters(const Word& letters) const {
        FreeWord w = unit();
        for (const auto& l : letters) {
            w = multiply(w, letter(l));
        }
        return w;
    }

    /// Concatenation, merging the A-letters that meet at the junction.
    [[nodiscard]] FreeWord multiply(const FreeWord& u, const FreeWord& v) const {
        FreeWord out;
        for (const auto& [wu, cu] : u.terms()) {
            for (const auto& [wv, cv] : v.terms()) {
                concat_into(out, wu, wv, cu * cv);
            }
        }
        return out;
    }

    /// Every basis letter: all e_i (including the unit carrier) followed by all X_a.
    [[nodiscard]] std::vector<Letter> alphabet() const {
        std::vector<Letter> out;
        for (std::size_t i = 0; i < algebra_->dim(); ++i) {
            out.push_back({LetterKind::algebra, i});
        }
        for (std::size_t a = 0; a < module_dim_; ++a) {
            out.push_back({LetterKind::module, a});
        }
        return out;
    }

    [[nodiscard]] std::string letter_name(const Letter& l) const {
        if (l.kind == LetterKind::algebra) {
            return algebra_->name(l.index);
        }
        return l.index < module_names_.size() ? module_names_[l.index] : "X" + std::to_string(l.index);
    }

    [[nodiscard]] std::string format(const Word& w) const {
        if (w.empty()) {
            return "1";
        }
        std::string s;
        for (std::size_t k = 0; k < w.size(); ++k) {
            s += (k == 0 ? "" : "*") + letter_name(w[k]);
        }
        return s;
    }

    [[nodiscard]] std::string format(const FreeWord& f) const {
        if (f.is_zero()) {
            return "0";
        }
        std::string s;
        for (const auto& [w, c] : f.terms()) {
            Rational coef = c;
            if (!s.empty()) {
                s += coef.sign() < 0 ? " - " : " + ";
                if (coef.sign() < 0) {
                    coef = -coef;
                }
            } else if (coef.sign() < 0) {
                s += "-";
                coef = -coef;
            }
            if (coef != Rational(1)) {
                s += coef.to_string() + (w.empty() ? "" : "*");
            } else if (w.empty()) {
                s += "1";
            }
            if (!w.empty()) {
                s += format(w);
            }
        }
        return s;
    }

private:
    void concat_into(FreeWord& out, const Word& u, const Word& v, const Rational& c) const {
        if (!u.empty() && !v.empty() && u.back().kind == LetterKind::algebra && v.front().kind == LetterKind::algebra) {
            const Vector prod = algebra_->multiply(algebra_->basis(u.back().index), algebra_->basis(v.front().index));
            const FreeWord mid = algebra_element(prod);
            Word head(u.begin(), u.end() - 1);
            for (const auto& [m, cm] : mid.terms()) {
                Word w = head;
                w.insert(w.end(), m.begin(), m.end());
                w.insert(w.end(), v.begin() + 1, v.end());
                out.add(w, c * cm);
            }
            return;
        }
        Word w = u;
        w.insert(w.end(), v.begin(), v.end());
        out.add(w, c);
    }

    const Algebra* algebra_;
    std::size_t module_dim_;
    std::vector<std::string> module_names_;
    std::size_t pivot_ = 0;
};

/// f^l : g -> f g
inline Matrix left_mult_op(const Algebra& a, const Vector& f) { return a.left_mult(f); }

/// X^partial for X given by coordinates in the pair's bimodule.
inline Matrix action_op(const Algebra& a, const CartanPair& p, const Vector& x) {
    if (x.size() != p.module.dim) {
        throw UsageError("module element has wrong dimension");
    }
    return p.action_of(x, a.dim());
}

/// mu : A * T(M) -> End(A), extending f -> f^l and X -> X^partial multiplicatively.
inline Matrix evaluate_mu(const Algebra& a, const CartanPair& p, const FreeWord& w) {
    const std::size_t n = a.dim();
    Matrix out(n, n);
    for (const auto& [word, c] : w.terms()) {
        Matrix m = Matrix::identity(n);
        for (const auto& l : word) {
            m = m * (l.kind == LetterKind::algebra ? a.left_mult(l.index) : p.action.at(l.index));
        }
        out.add_scaled(c, m);
    }
    return out;
}

/// A word is normal when no module letter is immediately followed by an algebra letter.
inline bool is_normal_word(const Word& w) {
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        if (w[k].kind == LetterKind::module && w[k + 1].kind == LetterKind::algebra) {
            return false;
        }
    }
    return true;
}

inline bool is_normal(const FreeWord& f) {
    for (const auto& [w, c] : f.terms()) {
        if (!is_normal_word(w)) {
            return false;
        }
    }
    return true;
}

struct NormalForm {
    FreeWord form;
    std::size_t rewrites = 0;   // total rule applications
    std::size_t max_depth = 0;  // longest chain of rewrites leading to a single term
};

/// Rewrites X * f -> (X.f) + X^partial(f) at the leftmost redex until every term reads
/// f * X_1 * ... * X_k. Sound for valid pairs because mu respects this rule exactly.
inline NormalForm normal_form_traced(const FreeProduct& fp, const CartanPair& p, const FreeWord& w) {
    const Algebra& a = fp.algebra();
    struct Pending {
        Rational coef;
        std::size_t depth;
    };
    std::map<Word, Pending> pending;
    auto push = [&pending](const Word& word, const Rational& c, std::size_t depth) {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = pending.try_emplace(word, Pending{c, depth});
        if (!inserted) {
            it->second.coef += c;
            it->second.depth = std::max(it->second.depth, depth);
            if (it->second.coef.is_zero()) {
                pending.erase(it);
            }
        }
    };
    for (const auto& [word, c] : w.terms()) {
        push(word, c, 0);
    }
    NormalForm nf;
    while (!pending.empty()) {
        auto it = pending.begin();
        const Word word = it->first;
        const Pending entry = it->second;
        pending.erase(it);
        std::size_t k = 0;
        while (k + 1 < word.size() &&
               !(word[k].kind == LetterKind::module && word[k + 1].kind == LetterKind::algebra)) {
            ++k;
        }
        if (k + 1 >= word.size()) {
            nf.form.add(word, entry.coef);
            nf.max_depth = std::max(nf.max_depth, entry.depth);
            continue;
        }
        ++nf.rewrites;
        const std::size_t x = word[k].index;
        const std::size_t f = word[k + 1].index;
        FreeWord prefix;
        prefix.add(Word(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(k)), entry.coef);
        FreeWord suffix;
        suffix.add(Word(word.begin() + static_cast<std::ptrdiff_t>(k + 2), word.end()), Rational(1));
        FreeWord middle = fp.module_element(p.module.right.at(f).column(x));
        middle += fp.algebra_element(p.action.at(x).column(f));
        const FreeWord next = fp.multiply(fp.multiply(prefix, middle), suffix);
        for (const auto& [nw, nc] : next.terms()) {
            push(nw, nc, entry.depth + 1);
        }
    }
    (void)a;
    return nf;
}

inline FreeWord normal_form(const FreeProduct& fp, const CartanPair& p, const FreeWord& w) {
    return normal_form_traced(fp, p, w).form;
}

/// Normal words of length <= max_len: an optional leading algebra letter, then module letters.
/// Ordered by length, then lexicographically.
inline std::vector<Word> normal_words(const FreeProduct& fp, std::size_t max_len) {
    std::vector<Word> out;
    std::vector<Word> pure{Word{}};  // module-only words of the current length
    for (std::size_t len = 0; len <= max_len; ++len) {
        std::vector<Word> batch;
        for (const auto& w : pure) {
            if (w.size() == len) {
                batch.push_back(w);
            }
            if (w.size() + 1 == len) {
                for (std::size_t i = 0; i < fp.algebra().dim(); ++i) {
                    if (i == fp.unit_pivot()) {
                        continue;
                    }
                    Word v{Letter{LetterKind::algebra, i}};
                    v.insert(v.end(), w.begin(), w.end());
                    batch.push_back(std::move(v));
                }
            }
        }
        std::sort(batch.begin(), batch.end());
        out.insert(out.end(), batch.begin(), batch.end());
        std::vector<Word> longer;
        for (const auto& w : pure) {
            if (w.size() == len) {
                longer.push_back(w);  // keep for the leading-letter variants at len + 1
                for (std::size_t x = 0; x < fp.module_dim(); ++x) {
                    Word v = w;
                    v.push_back({LetterKind::module, x});
                    longer.push_back(std::move(v));
                }
            }
        }
        pure = std::move(longer);
    }
    return out;
}

/// ker mu restricted to the span of normal words up to a length bound.
struct Relations {
    std::vector<Word> words;
    Subspace kernel;  // in coordinates over `words`
    std::size_t max_len = 0;

    [[nodiscard]] FreeWord relation(std::size_t k) const {
        FreeWord f;
        const Vector& v = kernel.basis().at(k);
        for (std::size_t i = 0; i < words.size(); ++i) {
            f.add(words[i], v[i]);
        }
        return f;
    }
};

inline Matrix normal_word_images(const Algebra& a, const CartanPair& p, const std::vector<Word>& words) {
    Matrix images(a.dim() * a.dim(), words.size());
    for (std::size_t k = 0; k < words.size(); ++k) {
        FreeWord w;
        w.add(words[k], Rational(1));
        images.set_column(k, evaluate_mu(a, p, w).flatten());
    }
    return images;
}

inline Relations find_relations(const FreeProduct& fp, const CartanPair& p, std::size_t max_len) {
    if (max_len < 1) {
        throw UsageError("relation search needs max_len >= 1");
    }
    Relations r;
    r.max_len = max_len;
    r.words = normal_words(fp, max_len);
    r.kernel = kernel(normal_word_images(fp.algebra(), p, r.words));
    return r;
}

/// Number of independent relations among normal words up to max_len, without building them.
inline std::size_t relation_count(const FreeProduct& fp, const CartanPair& p, std::size_t max_len) {
    const auto words = normal_words(fp, max_len);
    return words.size() - rank(normal_word_images(fp.algebra(), p, words));
}

/// The subalgebra of End(A) generated by all f^l and X^partial.
struct OperatorSubalgebra {
    std::size_t algebra_dim = 0;
    Subspace span;  // flattened n x n operators
    std::vector<std::string> generator_log;

    [[nodiscard]] std::size_t dim() const { return span.dim(); }
    [[nodiscard]] bool contains(const Matrix& op) const { return span.contains(op.flatten()); }
    [[nodiscard]] std::vector<Matrix> basis() const {
        std::vector<Matrix> out;
        for (const auto& v : span.basis()) {
            out.push_back(Matrix::from_flat(algebra_dim, algebra_dim, v));
        }
        return out;
    }
};

inline OperatorSubalgebra generate_diffop_algebra(const Algebra& a, const CartanPair& p) {
    const std::size_t n = a.dim();
    OperatorSubalgebra d;
    d.algebra_dim = n;
    std::vector<Vector> seed{Matrix::identity(n).flatten()};
    d.generator_log.emplace_back("id");
    for (std::size_t i = 0; i < n; ++i) {
        seed.push_back(a.left_mult(i).flatten());
        d.generator_log.push_back("l(" + a.name(i) + ")");
    }
    for (std::size_t x = 0; x < p.module.dim; ++x) {
        seed.push_back(p.action[x].flatten());
        d.generator_log.push_back("d(" + p.module.name(x, "X") + ")");
    }
    d.span = span_closure(n * n, seed, [n](const Vector& u, const Vector& v) {
        return (Matrix::from_flat(n, n, u) * Matrix::from_flat(n, n, v)).flatten();
    });
    return d;
}

/// span{mu(w) : w normal} grown one module letter at a time until it stops growing.
struct NormalWordSpan {
    Subspace span;
    std::size_t stable_length = 0;  // module-word length after which nothing new appears
};

inline NormalWordSpan normal_word_span(const Algebra& a, const CartanPair& p) {
    const std::size_t n = a.dim();
    EchelonBuilder pure(n * n);
    pure.insert(Matrix::identity(n).flatten());
    std::vector<Vector> frontier{Matrix::identity(n).flatten()};
    std::size_t len = 0;
    while (!frontier.empty()) {
        std::vector<Vector> next;
        for (const auto& t : frontier) {
            for (const auto& act : p.action) {
                const Vector v = (Matrix::from_flat(n, n, t) * act).flatten();
                if (pure.insert(v)) {
                    next.push_back(v);
                }
            }
        }
        frontier = std::move(next);
        ++len;
    }
    std::vector<Vector> all;
    for (const auto& t : pure.accepted()) {
        const Matrix tm = Matrix::from_flat(n, n, t);
        for (std::size_t i = 0; i < n; ++i) {
            all.push_back((a.left_mult(i) * tm).flatten());
        }
    }
    return {Subspace::span(n * n, all), len - 1};
}

struct CcrEntry {
    std::size_t f = 0;
    std::size_t x = 0;
    bool central = false;      // f.X == X.f
    bool commutator = false;   // [X^partial, f^l] == (X^partial(f))^l
    bool reordering = false;  // X^partial o f^l == (X.f)^partial + (X^partial(f))^l
};

struct CcrReport {
    std::vector<CcrEntry> entries;
    Report violations;  // pairs where the commutator form fails

    [[nodiscard]] bool ok() const { return violations.ok(); }
};

inline CcrReport check_ccr(const Algebra& a, const CartanPair& p) {
    const std::size_t n = a.dim();
    CcrReport r;
    for (std::size_t i = 0; i < n; ++i) {
        const Matrix& fl = a.left_mult(i);
        for (std::size_t x = 0; x < p.module.dim; ++x) {
            const Matrix& dx = p.action[x];
            CcrEntry e{i, x};
            e.central = p.module.left[i].column(x) == p.module.right[i].column(x);
            const Matrix creation = a.left_mult(dx.column(i));
            const Matrix comm = dx * fl - fl * dx;
            e.commutator = comm == creation;
            e.reordering = dx * fl == p.action_of(p.module.right[i].column(x), n) + creation;
            if (!e.commutator) {
                r.violations.add("ccr", {i, x}, "f=" + a.name(i) + ", X=" + p.module.name(x, "X"),
                                 (creation - comm).flatten());
            }
            r.entries.push_back(e);
        }
    }
    return r;
}

/// The unit of A as vacuum: X^partial(1) = 0 and f^l(1) = f on every basis element.
inline Report fock_check(const Algebra& a, const CartanPair& p) {
    Report r;
    for (std::size_t x = 0; x < p.module.dim; ++x) {
        const Vector v = p.action.at(x).apply(a.unit());
        if (!is_zero(v)) {
            r.add("fock.annihilation", {x}, "X=" + p.module.name(x, "X"), zero_vector(a.dim()) - v);
        }
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const Vector v = a.left_mult(i).apply(a.unit());
        if (v != a.basis(i)) {
            r.add("fock.creation", {i}, "f=" + a.name(i), a.basis(i) - v);
        }
    }
    return r;
}

}  // namespace ncwb
