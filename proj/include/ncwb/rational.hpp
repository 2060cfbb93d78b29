#pragma once

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ncwb {

/// Thrown when textual input (a rational, a file, a builtin parameter) is malformed.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown on dimension mismatches and other misuse of the API.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact rational number, always kept in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(long numerator, long denominator) {
        if (denominator == 0) {
            throw UsageError("rational with zero denominator");
        }
        value_ = mpq_class(numerator, denominator);
        value_.canonicalize();
    }
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Accepts "p" or "p/q" with optional leading sign on p; q must be nonzero.
    static Rational parse(std::string_view text) {
        auto bad = [&] { return ParseError("malformed rational \"" + std::string(text) + "\""); };
        if (text.empty()) {
            throw bad();
        }
        const auto slash = text.find('/');
        auto digits_ok = [](std::string_view s, bool allow_sign) {
            if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) {
                s.remove_prefix(1);
            }
            if (s.empty()) {
                return false;
            }
            for (char c : s) {
                if (c < '0' || c > '9') {
                    return false;
                }
            }
            return true;
        };
        std::string_view num = text.substr(0, slash);
        std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
        if (!digits_ok(num, true) || !digits_ok(den, false)) {
            throw bad();
        }
        mpz_class p(std::string(num.front() == '+' ? num.substr(1) : num), 10);
        mpz_class q(std::string(den), 10);
        if (q == 0) {
            throw bad();
        }
        return Rational(mpq_class(p, q));
    }

    [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
    [[nodiscard]] int sign() const { return sgn(value_); }
    [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }

    /// "p" for integers, "p/q" otherwise.
    [[nodiscard]] std::string to_string() const { return value_.get_str(); }
    [[nodiscard]] const mpq_class& raw() const { return value_; }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) {
            throw UsageError("division by zero");
        }
        value_ /= o.value_;
        return *this;
    }

    /// this -= f * b without a temporary Rational.
    void sub_mul(const Rational& f, const Rational& b) {
        thread_local mpq_class scratch;
        mpq_mul(scratch.get_mpq_t(), f.value_.get_mpq_t(), b.value_.get_mpq_t());
        mpq_sub(value_.get_mpq_t(), value_.get_mpq_t(), scratch.get_mpq_t());
    }
    /// this += f * b without a temporary Rational.
    void add_mul(const Rational& f, const Rational& b) {
        thread_local mpq_class scratch;
        mpq_mul(scratch.get_mpq_t(), f.value_.get_mpq_t(), b.value_.get_mpq_t());
        mpq_add(value_.get_mpq_t(), value_.get_mpq_t(), scratch.get_mpq_t());
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class value_{0};
};

using Vector = std::vector<Rational>;

inline Vector zero_vector(std::size_t n) { return Vector(n, Rational(0)); }

inline Vector unit_vector(std::size_t n, std::size_t i) {
    Vector v(n, Rational(0));
    v.at(i) = Rational(1);
    return v;
}

inline bool is_zero(const Vector& v) {
    for (const auto& x : v) {
        if (!x.is_zero()) {
            return false;
        }
    }
    return true;
}

inline Vector operator+(Vector a, const Vector& b) {
    if (a.size() != b.size()) {
        throw UsageError("vector size mismatch");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += b[i];
    }
    return a;
}

inline Vector operator-(Vector a, const Vector& b) {
    if (a.size() != b.size()) {
        throw UsageError("vector size mismatch");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] -= b[i];
    }
    return a;
}

inline Vector operator*(const Rational& s, Vector v) {
    for (auto& x : v) {
        x *= s;
    }
    return v;
}

inline std::string to_string(const Vector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) {
            out += ", ";
        }
        out += v[i].to_string();
    }
    return out + ")";
}

}  // namespace ncwb
