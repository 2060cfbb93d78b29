#pragma once

#include "ncwb/builtins.hpp"
#include "ncwb/diffops.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing_support {

using namespace ncwb;

/// Small rationals p/q with |p| <= 4, 1 <= q <= 3; zero about a third of the time.
inline Rational small_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> zero(0, 2);
    if (zero(rng) == 0) {
        return Rational(0);
    }
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    return Rational(num(rng), den(rng));
}

inline Vector random_vector(std::mt19937& rng, std::size_t n) {
    Vector v;
    for (std::size_t k = 0; k < n; ++k) {
        v.push_back(small_rational(rng));
    }
    return v;
}

inline Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
    return Matrix::from_flat(rows, cols, random_vector(rng, rows * cols));
}

/// Random element of a subspace: a random combination of its basis.
inline Vector random_member(std::mt19937& rng, const Subspace& s) {
    return s.combination(random_vector(rng, s.dim()));
}

/// The default parameter set of every builtin.
inline std::vector<ExampleBundle> all_builtins() {
    std::vector<ExampleBundle> out;
    for (const auto& name : builtin_names()) {
        out.push_back(builtin(name));
    }
    return out;
}

/// Every letter sequence of exactly `len` letters over `alphabet`.
inline std::vector<Word> all_sequences(const std::vector<Letter>& alphabet, std::size_t len) {
    std::vector<Word> out{Word{}};
    for (std::size_t k = 0; k < len; ++k) {
        std::vector<Word> next;
        for (const auto& w : out) {
            for (const auto& l : alphabet) {
                Word v = w;
                v.push_back(l);
                next.push_back(std::move(v));
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace testing_support
