#pragma once

// Exact coefficient fields: rationals, integer polynomials in q and the
// field of rational functions Q(q) in canonical (fully cancelled) form.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imverma {

using Integer = mpz_class;
using Rational = mpq_class;

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public AlgebraError {
public:
    DivisionByZero() : AlgebraError("division by zero") {}
};

/// Raised when a rational function is evaluated at q = 1 but has a pole there.
class PoleAtOne : public AlgebraError {
public:
    explicit PoleAtOne(int order)
        : AlgebraError("pole of order " + std::to_string(order) + " at q=1"), order_(order) {}
    int order() const noexcept { return order_; }

private:
    int order_;
};

class ParseError : public AlgebraError {
public:
    ParseError(const std::string& what, std::size_t pos)
        : AlgebraError(what + " at offset " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// ---------------------------------------------------------------------------
// Poly: dense integer polynomial in q, coefficient i multiplies q^i.
// Trailing zero coefficients are always trimmed; the zero polynomial is empty.

class Poly {
public:
    Poly() = default;
    Poly(long c) {  // NOLINT(google-explicit-constructor)
        if (c != 0) c_.emplace_back(c);
    }
    Poly(const Integer& c) {  // NOLINT(google-explicit-constructor)
        if (c != 0) c_.push_back(c);
    }
    explicit Poly(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly monomial(const Integer& coeff, int power) {
        Poly p;
        if (coeff == 0) return p;
        p.c_.assign(static_cast<std::size_t>(power) + 1, Integer(0));
        p.c_.back() = coeff;
        return p;
    }
    static Poly q() { return monomial(1, 1); }

    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const Integer& lead() const { return c_.back(); }
    const std::vector<Integer>& coeffs() const noexcept { return c_; }
    Integer coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : Integer(0);
    }

    /// Lowest power of q with a nonzero coefficient (0 for the zero polynomial).
    int q_order() const noexcept {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) return static_cast<int>(i);
        return 0;
    }
    std::size_t term_count() const noexcept {
        return static_cast<std::size_t>(std::count_if(c_.begin(), c_.end(), [](const Integer& x) { return x != 0; }));
    }

    Integer content() const {
        Integer g = 0;
        for (const auto& x : c_) {
            if (x == 0) continue;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    Integer eval(const Integer& x) const {
        Integer acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    Integer eval_at_one() const {
        Integer acc = 0;
        for (const auto& x : c_) acc += x;
        return acc;
    }

    Poly shifted_down(int k) const {
        if (k <= 0 || is_zero()) return *this;
        return Poly(std::vector<Integer>(c_.begin() + k, c_.end()));
    }
    Poly shifted_up(int k) const {
        if (k <= 0 || is_zero()) return *this;
        std::vector<Integer> v(static_cast<std::size_t>(k), Integer(0));
        v.insert(v.end(), c_.begin(), c_.end());
        return Poly(std::move(v));
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Integer(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Integer(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Integer> r(a.c_.size() + b.c_.size() - 1, Integer(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j] == 0) continue;
                mpz_addmul(r[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
            }
        }
        return Poly(std::move(r));
    }
    Poly scaled(const Integer& k) const {
        if (k == 0) return {};
        Poly r = *this;
        for (auto& x : r.c_) x *= k;
        return r;
    }
    /// Exact division of every coefficient by an integer.
    Poly divexact(const Integer& k) const {
        Poly r = *this;
        for (auto& x : r.c_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), k.get_mpz_t());
        return r;
    }

    /// Exact polynomial division over Z. Throws if the division is not exact.
    Poly divexact(const Poly& d) const {
        if (d.is_zero()) throw DivisionByZero();
        if (is_zero()) return {};
        if (d.c_.size() == 1) return divexact(d.c_[0]);
        if (degree() < d.degree()) throw AlgebraError("inexact polynomial division");
        std::vector<Integer> rem = c_;
        std::vector<Integer> quot(c_.size() - d.c_.size() + 1, Integer(0));
        const Integer& ld = d.lead();
        for (int i = static_cast<int>(quot.size()) - 1; i >= 0; --i) {
            Integer& top = rem[static_cast<std::size_t>(i) + d.c_.size() - 1];
            if (top == 0) continue;
            if (!mpz_divisible_p(top.get_mpz_t(), ld.get_mpz_t())) throw AlgebraError("inexact polynomial division");
            Integer f;
            mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), ld.get_mpz_t());
            for (std::size_t j = 0; j < d.c_.size(); ++j)
                mpz_submul(rem[static_cast<std::size_t>(i) + j].get_mpz_t(), f.get_mpz_t(), d.c_[j].get_mpz_t());
            quot[static_cast<std::size_t>(i)] = f;
        }
        for (const auto& x : rem)
            if (x != 0) throw AlgebraError("inexact polynomial division");
        return Poly(std::move(quot));
    }

    /// Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) * a mod b.
    static Poly pseudo_remainder(Poly a, const Poly& b) {
        const int db = b.degree();
        const Integer& lb = b.lead();
        while (!a.is_zero() && a.degree() >= db) {
            const int shift = a.degree() - db;
            Integer la = a.lead();
            for (auto& x : a.c_) x *= lb;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                mpz_submul(a.c_[static_cast<std::size_t>(shift) + j].get_mpz_t(), la.get_mpz_t(), b.c_[j].get_mpz_t());
            a.trim();
        }
        return a;
    }

    Poly primitive_part() const {
        if (is_zero()) return {};
        Integer g = content();
        if (lead() < 0) g = -g;
        return divexact(g);
    }

    /// Greatest common divisor in Z[q], normalised to a positive leading coefficient.
    friend Poly gcd(const Poly& a, const Poly& b) {
        if (a.is_zero()) return b.is_zero() ? Poly() : normalized_sign(b);
        if (b.is_zero()) return normalized_sign(a);
        const int qk = std::min(a.q_order(), b.q_order());
        Poly x = a.shifted_down(a.q_order());
        Poly y = b.shifted_down(b.q_order());
        Integer g;
        Integer ca = x.content(), cb = y.content();
        mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
        if (x.is_constant() || y.is_constant()) return monomial(g, qk);
        x = x.divexact(ca);
        y = y.divexact(cb);
        if (x.degree() < y.degree()) std::swap(x, y);
        while (true) {
            Poly r = pseudo_remainder(x, y);
            if (r.is_zero()) break;
            if (r.is_constant()) {
                y = Poly(1);
                break;
            }
            x = std::move(y);
            y = r.primitive_part();
        }
        y = y.primitive_part();
        return y.scaled(g).shifted_up(qk);
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend bool operator<(const Poly& a, const Poly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        return false;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        bool first = true;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const Integer& x = c_[i];
            if (x == 0) continue;
            Integer ax = abs(x);
            if (x < 0)
                out += first ? "-" : "-";
            else if (!first)
                out += "+";
            if (i == 0) {
                out += ax.get_str();
            } else {
                if (ax != 1) out += ax.get_str() + "*";
                out += "q";
                if (i > 1) out += "^" + std::to_string(i);
            }
            first = false;
        }
        return out;
    }

private:
    static Poly normalized_sign(const Poly& p) { return p.lead() < 0 ? -p : p; }
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Integer> c_;
};

// ---------------------------------------------------------------------------
// Scalar: element of Q(q) stored as num/den in Z[q], fully cancelled, with
// positive leading coefficient in the denominator. Canonical form makes
// equality structural.

class Scalar {
public:
    Scalar() : den_(1) {}
    Scalar(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    Scalar(const Integer& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    Scalar(const Rational& r) : num_(r.get_num()), den_(r.get_den()) {}  // NOLINT(google-explicit-constructor)
    Scalar(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DivisionByZero();
        canonicalize();
    }
    static Scalar from_poly(Poly p) {
        Scalar s;
        s.num_ = std::move(p);
        return s;
    }

    /// q^k for any integer k.
    static Scalar q_power(int k) {
        Scalar s;
        if (k >= 0)
            s.num_ = Poly::monomial(1, k);
        else {
            s.num_ = Poly(1);
            s.den_ = Poly::monomial(1, -k);
        }
        return s;
    }
    static Scalar q() { return q_power(1); }

    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_one() const noexcept { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const noexcept { return den_.is_one(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }

    /// Rational value when the function is constant.
    Rational constant_value() const {
        if (!is_constant()) throw AlgebraError("scalar " + str() + " is not constant");
        Rational r(num_.coeff(0), den_.coeff(0));
        r.canonicalize();
        return r;
    }

    /// Valuation at q = 1: multiplicity of (q-1) in num minus that in den.
    int order_at_one() const {
        if (is_zero()) throw AlgebraError("order at q=1 of zero");
        return multiplicity_at_one(num_) - multiplicity_at_one(den_);
    }
    /// Membership in the local ring A = { f/g : g(1) != 0 }.
    bool in_A() const { return den_.eval_at_one() != 0; }

    Rational at_one() const {
        Integer d = den_.eval_at_one();
        if (d == 0) throw PoleAtOne(multiplicity_at_one(den_));
        Rational r(num_.eval_at_one(), d);
        r.canonicalize();
        return r;
    }

    Scalar operator-() const {
        Scalar r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        Scalar r;
        if (a.den_ == b.den_) {
            r.num_ = a.num_ + b.num_;
            r.den_ = a.den_;
            if (!r.den_.is_one()) r.canonicalize();
            else if (r.num_.is_zero()) r.den_ = Poly(1);
            return r;
        }
        if (a.den_.is_constant() && b.den_.is_constant()) {
            Integer da = a.den_.lead(), db = b.den_.lead();
            r.num_ = a.num_.scaled(db) + b.num_.scaled(da);
            r.den_ = Poly(Integer(da * db));
            r.canonicalize();
            return r;
        }
        Poly g = gcd(a.den_, b.den_);
        Poly ca = b.den_.divexact(g);
        Poly cb = a.den_.divexact(g);
        r.num_ = a.num_ * ca + b.num_ * cb;
        r.den_ = a.den_ * ca;
        r.canonicalize();
        return r;
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_zero() || b.is_zero()) return {};
        Scalar r;
        if (a.den_.is_one() && b.den_.is_one()) {
            r.num_ = a.num_ * b.num_;
            return r;
        }
        Poly g1 = gcd(a.num_, b.den_);
        Poly g2 = gcd(b.num_, a.den_);
        r.num_ = a.num_.divexact(g1) * b.num_.divexact(g2);
        r.den_ = a.den_.divexact(g2) * b.den_.divexact(g1);
        r.fix_sign();
        return r;
    }
    Scalar inverse() const {
        if (is_zero()) throw DivisionByZero();
        Scalar r;
        r.num_ = den_;
        r.den_ = num_;
        r.fix_sign();
        return r;
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

    Scalar pow(int k) const {
        if (k < 0) return inverse().pow(-k);
        Scalar r(1), base = *this;
        while (k > 0) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator<(const Scalar& a, const Scalar& b) {
        if (a.den_ != b.den_) return a.den_ < b.den_;
        return a.num_ < b.num_;
    }

    std::string str() const {
        if (den_.is_one()) return num_.str();
        auto wrap = [](const Poly& p) {
            bool bare = p.term_count() == 1 && p.lead() > 0 && (p.degree() == 0 || p.lead() == 1);
            return bare ? p.str() : "(" + p.str() + ")";
        };
        std::string n = num_.term_count() == 1 ? num_.str() : "(" + num_.str() + ")";
        return n + "/" + wrap(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

private:
    static int multiplicity_at_one(Poly p) {
        static const Poly q_minus_one(std::vector<Integer>{Integer(-1), Integer(1)});
        int m = 0;
        while (!p.is_zero() && p.eval_at_one() == 0) {
            p = p.divexact(q_minus_one);
            ++m;
        }
        return m;
    }
    void fix_sign() {
        if (den_.lead() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }
    void canonicalize() {
        if (num_.is_zero()) {
            den_ = Poly(1);
            return;
        }
        Poly g = gcd(num_, den_);
        if (!g.is_one()) {
            num_ = num_.divexact(g);
            den_ = den_.divexact(g);
        }
        fix_sign();
    }

    Poly num_;
    Poly den_;
};

inline std::string to_string(const Scalar& s) { return s.str(); }

/// The q-integer [k] = (q^k - q^-k)/(q - q^-1).
inline Scalar qnum(int k) {
    if (k == 0) return {};
    const int a = k < 0 ? -k : k;
    std::vector<Integer> c(static_cast<std::size_t>(2 * a - 1), Integer(0));
    for (int j = 0; j < a; ++j) c[static_cast<std::size_t>(2 * j)] = 1;
    Scalar s(Poly(std::move(c)), Poly::monomial(1, a - 1));
    return k < 0 ? -s : s;
}

/// q - q^{-1}
inline Scalar q_minus_qinv() { return Scalar::q() - Scalar::q_power(-1); }

/// Gaussian binomial [n choose k]_q (symmetric convention), k >= 0.
inline Scalar qbinomial(int n, int k) {
    if (k < 0) return {};
    Scalar r(1);
    for (int j = 1; j <= k; ++j) r = r * qnum(n - j + 1) / qnum(j);
    return r;
}

// ---------------------------------------------------------------------------
// Parsing of ASCII scalar expressions: integers, q, + - * / ^ and parentheses.

namespace detail {

class ScalarParser {
public:
    explicit ScalarParser(std::string_view text) : s_(text) {}

    Scalar parse() {
        Scalar v = expr();
        skip();
        if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        return v;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    Scalar expr() {
        Scalar v = term();
        while (true) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }
    Scalar term() {
        Scalar v = unary();
        while (true) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                std::size_t at = pos_;
                Scalar d = unary();
                if (d.is_zero()) throw ParseError("division by zero", at);
                v /= d;
            } else {
                return v;
            }
        }
    }
    Scalar unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    Scalar power() {
        Scalar base = primary();
        if (eat('^')) {
            bool neg = false;
            bool paren = eat('(');
            if (eat('-')) neg = true;
            else eat('+');
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) throw ParseError("expected integer exponent", pos_);
            int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
            if (paren && !eat(')')) throw ParseError("expected ')'", pos_);
            if (base.is_zero() && neg) throw ParseError("division by zero", start);
            return base.pow(neg ? -e : e);
        }
        return base;
    }
    Scalar primary() {
        skip();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Scalar v = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return v;
        }
        if (c == 'q') {
            ++pos_;
            return Scalar::q();
        }
        if (c == '[') {  // q-integer [n]
            ++pos_;
            bool neg = eat('-');
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) throw ParseError("expected integer inside [ ]", pos_);
            int n = std::stoi(std::string(s_.substr(start, pos_ - start)));
            if (!eat(']')) throw ParseError("expected ']'", pos_);
            if (n == 0) return Scalar(0);
            Scalar v = (Scalar::q().pow(n) - Scalar::q().pow(-n)) / (Scalar::q() - Scalar::q().pow(-1));
            return neg ? -v : v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Scalar(Integer(std::string(s_.substr(start, pos_ - start))));
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Scalar parse_scalar(std::string_view text) { return detail::ScalarParser(text).parse(); }

/// Parses a rational such as "3/4" or "-2" (the same grammar, constants only).
inline Rational parse_rational(std::string_view text) {
    Scalar s = parse_scalar(text);
    if (!s.is_constant()) throw ParseError("expected a rational constant, got '" + std::string(text) + "'", 0);
    return s.constant_value();
}

// ---------------------------------------------------------------------------
// Field traits: lets the diagonal-module and Heisenberg code run over either
// the classical field Q or the quantum field Q(q).

template <class F>
struct Field;

template <>
struct Field<Rational> {
    static constexpr bool quantum = false;
    static Rational bracket_number(long n) { return Rational(n); }
    static bool is_zero(const Rational& x) { return x == 0; }
    static std::string str(const Rational& x) { return x.get_str(); }
    static Rational parse(std::string_view t) { return parse_rational(t); }
    /// Integer value n when x == n (classical test x in Z).
    static bool as_integer(const Rational& x, long& n) {
        if (x.get_den() != 1 || !x.get_num().fits_slong_p()) return false;
        n = x.get_num().get_si();
        return true;
    }
};

template <>
struct Field<Scalar> {
    static constexpr bool quantum = true;
    static Scalar bracket_number(long n) { return qnum(static_cast<int>(n)); }
    static bool is_zero(const Scalar& x) { return x.is_zero(); }
    static std::string str(const Scalar& x) { return x.str(); }
    static Scalar parse(std::string_view t) { return parse_scalar(t); }
    static bool as_integer(const Scalar& x, long& n) {
        if (!x.is_constant()) return false;
        Rational r = x.constant_value();
        if (r.get_den() != 1 || !r.get_num().fits_slong_p()) return false;
        n = r.get_num().get_si();
        return true;
    }
};

}  // namespace imverma

template <>
struct std::hash<imverma::Poly> {
    std::size_t operator()(const imverma::Poly& p) const noexcept {
        std::size_t h = p.coeffs().size();
        for (const auto& c : p.coeffs()) h = h * 1000003u ^ static_cast<std::size_t>(mpz_get_si(c.get_mpz_t()));
        return h;
    }
};
