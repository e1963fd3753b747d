#pragma once

// Root data of sl(m|n) for a parity sequence s, and the total orders on
// positive roots, on (root, loop degree) positions and on monomial indices.

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "imverma/scalar.hpp"

namespace imverma {

/// s = (s_1, ..., s_N) with entries +1 / -1.
class ParitySequence {
public:
    ParitySequence() = default;
    explicit ParitySequence(std::vector<int> s) : s_(std::move(s)) {
        for (int x : s_)
            if (x != 1 && x != -1) throw AlgebraError("parity sequence entries must be +1 or -1");
    }
    static ParitySequence parse(std::string_view text) {
        std::vector<int> s;
        for (char c : text) {
            if (c == '+')
                s.push_back(1);
            else if (c == '-')
                s.push_back(-1);
            else
                throw ParseError("parity sequence expects '+' or '-'", s.size());
        }
        return ParitySequence(std::move(s));
    }
    /// Distinguished sequence (+^m, -^n).
    static ParitySequence distinguished(int m, int n) {
        std::vector<int> s(static_cast<std::size_t>(m), 1);
        s.insert(s.end(), static_cast<std::size_t>(n), -1);
        return ParitySequence(std::move(s));
    }

    int size() const noexcept { return static_cast<int>(s_.size()); }
    int operator[](int a) const { return s_.at(static_cast<std::size_t>(a - 1)); }  // 1-based
    int even_count() const { return static_cast<int>(std::count(s_.begin(), s_.end(), 1)); }
    int odd_count() const { return size() - even_count(); }
    bool is_distinguished() const { return std::is_sorted(s_.begin(), s_.end(), std::greater<>()); }
    std::string str() const {
        std::string out;
        for (int x : s_) out += x > 0 ? '+' : '-';
        return out;
    }
    friend bool operator==(const ParitySequence&, const ParitySequence&) = default;

private:
    std::vector<int> s_;
};

/// Positive root e_a - e_b, 1 <= a < b <= N. Ordered lexicographically on (a, b).
struct Root {
    int a = 1;
    int b = 2;

    int height() const { return b - a; }
    bool is_simple() const { return b == a + 1; }
    std::string str() const { return "e" + std::to_string(a) + "-e" + std::to_string(b); }
    static Root parse(std::string_view text) {
        auto fail = [&] { return ParseError("malformed root '" + std::string(text) + "'", 0); };
        auto dash = text.find('-');
        if (text.size() < 5 || text[0] != 'e' || dash == std::string_view::npos || dash + 1 >= text.size() ||
            text[dash + 1] != 'e')
            throw fail();
        try {
            Root r{std::stoi(std::string(text.substr(1, dash - 1))), std::stoi(std::string(text.substr(dash + 2)))};
            if (r.a >= r.b || r.a < 1) throw fail();
            return r;
        } catch (const std::logic_error&) {
            throw fail();
        }
    }
    friend auto operator<=>(const Root&, const Root&) = default;
};

/// Element (alpha, r) of Delta^+ x Z; ordered by root first, then degree.
struct Position {
    Root root;
    int degree = 0;
    friend auto operator<=>(const Position&, const Position&) = default;
};

/// Finitely supported exponent map Delta^+ x Z -> Z_{>=0}. Keys are kept in
/// increasing position order; zero exponents are never stored.
class MonomialIndex {
public:
    MonomialIndex() = default;

    int operator()(const Position& p) const {
        auto it = e_.find(p);
        return it == e_.end() ? 0 : it->second;
    }
    void set(const Position& p, int exponent) {
        if (exponent < 0) throw AlgebraError("negative exponent in monomial index");
        if (exponent == 0)
            e_.erase(p);
        else
            e_[p] = exponent;
    }
    void add(const Position& p, int delta = 1) { set(p, (*this)(p) + delta); }

    bool empty() const noexcept { return e_.empty(); }
    const std::map<Position, int>& entries() const noexcept { return e_; }
    int letter_count() const {
        int n = 0;
        for (auto& [p, e] : e_) n += e;
        return n;
    }
    int total_degree() const {
        int n = 0;
        for (auto& [p, e] : e_) n += e * p.degree;
        return n;
    }
    /// Smallest position with a nonzero exponent (the rightmost factor of x^-_m).
    const Position& min_position() const {
        if (e_.empty()) throw AlgebraError("empty monomial has no minimal position");
        return e_.begin()->first;
    }

    friend bool operator==(const MonomialIndex&, const MonomialIndex&) = default;

    /// Order on monomials: compare exponents at the minimal position where they differ.
    friend std::strong_ordering compare_monomials(const MonomialIndex& x, const MonomialIndex& y) {
        auto i = x.e_.begin(), j = y.e_.begin();
        while (i != x.e_.end() || j != y.e_.end()) {
            if (j == y.e_.end() || (i != x.e_.end() && i->first < j->first))
                return std::strong_ordering::greater;  // x nonzero where y vanishes
            if (i == x.e_.end() || j->first < i->first) return std::strong_ordering::less;
            if (i->second != j->second) return i->second <=> j->second;
            ++i;
            ++j;
        }
        return std::strong_ordering::equal;
    }
    friend std::strong_ordering operator<=>(const MonomialIndex& x, const MonomialIndex& y) {
        return compare_monomials(x, y);
    }

    std::string str() const {
        if (e_.empty()) return "1";
        std::string out;
        for (auto it = e_.rbegin(); it != e_.rend(); ++it) {
            if (!out.empty()) out += " ";
            out += "x(" + it->first.root.str() + "," + std::to_string(it->first.degree) + ")";
            if (it->second > 1) out += "^" + std::to_string(it->second);
        }
        return out;
    }

private:
    std::map<Position, int> e_;
};

/// Element of the root lattice Q in the simple-root basis.
using RootLattice = std::vector<long>;

inline long height(const RootLattice& beta) {
    long h = 0;
    for (long c : beta) {
        if (c < 0) throw AlgebraError("element is not in Q^+");
        h += c;
    }
    return h;
}

/// Weight: values on the coroots h_i, on c and on d.
struct Weight {
    std::vector<Rational> h;
    Rational c = 0;
    Rational d = 0;

    bool is_integral() const {
        return std::all_of(h.begin(), h.end(), [](const Rational& x) { return x.get_den() == 1; });
    }
};

class RootData {
public:
    explicit RootData(ParitySequence s) : s_(std::move(s)) {
        const int N = s_.size();
        if (N < 2) throw AlgebraError("parity sequence must have length N >= 2");
        const int r = N - 1;
        cartan_.assign(static_cast<std::size_t>(r), std::vector<long>(static_cast<std::size_t>(r), 0));
        for (int i = 1; i <= r; ++i)
            for (int j = 1; j <= r; ++j) cartan_[i - 1][j - 1] = eps_form(i, i + 1, j, j + 1);
        for (int a = 1; a <= N; ++a)
            for (int b = a + 1; b <= N; ++b) roots_.push_back(Root{a, b});
        reduced_ = s_.even_count() == s_.odd_count();
        if (reduced_) {
            reduced_cartan_ = cartan_;
            reduced_cartan_.pop_back();
            for (auto& row : reduced_cartan_) row.pop_back();
        }
    }

    const ParitySequence& parity() const noexcept { return s_; }
    int N() const noexcept { return s_.size(); }
    /// |I| = N - 1 simple roots.
    int rank() const noexcept { return s_.size() - 1; }
    int m() const { return s_.even_count(); }
    int n() const { return s_.odd_count(); }
    /// True for m = n, where the Heisenberg layer uses I' = {1..N-2}.
    bool is_reduced() const noexcept { return reduced_; }
    /// Size of the index set used by the Heisenberg/diagonal layer (I or I').
    int heis_rank() const noexcept { return reduced_ ? rank() - 1 : rank(); }

    const std::vector<std::vector<long>>& cartan() const noexcept { return cartan_; }
    long A(int i, int j) const { return cartan_.at(static_cast<std::size_t>(i - 1)).at(static_cast<std::size_t>(j - 1)); }
    /// Cartan matrix of the Heisenberg layer (A' when m = n).
    const std::vector<std::vector<long>>& heis_cartan() const noexcept { return reduced_ ? reduced_cartan_ : cartan_; }

    /// Parity (0 even / 1 odd) of the simple root i.
    int simple_parity(int i) const { return (1 - s_[i] * s_[i + 1]) / 2; }
    int parity(const Root& r) const {
        check(r);
        return (1 - s_[r.a] * s_[r.b]) / 2;
    }
    /// Positive roots sorted increasingly.
    const std::vector<Root>& positive_roots() const noexcept { return roots_; }
    Root simple_root(int i) const { return Root{i, i + 1}; }

    void check(const Root& r) const {
        if (r.a < 1 || r.b > N() || r.a >= r.b) throw AlgebraError("not a positive root: " + r.str());
    }
    std::strong_ordering compare_roots(const Root& x, const Root& y) const {
        check(x);
        check(y);
        return x <=> y;
    }
    static std::strong_ordering compare_positions(const Position& x, const Position& y) { return x <=> y; }

    /// Simple-root coordinates of e_a - e_b.
    RootLattice coordinates(const Root& r) const {
        check(r);
        RootLattice v(static_cast<std::size_t>(rank()), 0);
        for (int i = r.a; i < r.b; ++i) v[i - 1] = 1;
        return v;
    }
    /// (alpha | beta) on the root lattice.
    long form(const RootLattice& x, const RootLattice& y) const {
        long acc = 0;
        for (int i = 0; i < rank(); ++i)
            for (int j = 0; j < rank(); ++j) acc += x[i] * cartan_[i][j] * y[j];
        return acc;
    }
    long form(const Root& x, const Root& y) const { return eps_form(x.a, x.b, y.a, y.b); }

    /// Q^+ weight of a monomial index (sum of its roots with multiplicity).
    RootLattice weight(const MonomialIndex& m) const {
        RootLattice v(static_cast<std::size_t>(rank()), 0);
        for (auto& [p, e] : m.entries()) {
            auto c = coordinates(p.root);
            for (int i = 0; i < rank(); ++i) v[i] += e * c[i];
        }
        return v;
    }

    /// Odd roots carry exponent at most one.
    bool is_valid(const MonomialIndex& m) const {
        for (auto& [p, e] : m.entries()) {
            check(p.root);
            if (parity(p.root) == 1 && e > 1) return false;
        }
        return true;
    }

    /// Root whose simple coordinates are beta, if any.
    bool root_of(const RootLattice& beta, Root& out) const {
        int a = -1, b = -1;
        for (int i = 0; i < rank(); ++i) {
            if (beta[i] != 0 && beta[i] != 1) return false;
            if (beta[i] == 1) {
                if (a < 0) a = i + 1;
                else if (b != i) return false;
                b = i + 1;
            }
        }
        if (a < 0) return false;
        out = Root{a, b + 1};
        return true;
    }

    Rational cartan_determinant() const { return determinant(cartan_); }

    static Rational determinant(const std::vector<std::vector<long>>& m) {
        const std::size_t n = m.size();
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        Rational det = 1;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            while (p < n && a[p][c] == 0) ++p;
            if (p == n) return 0;
            if (p != c) {
                std::swap(a[p], a[c]);
                det = -det;
            }
            det *= a[c][c];
            for (std::size_t r = c + 1; r < n; ++r) {
                if (a[r][c] == 0) continue;
                Rational f = a[r][c] / a[c][c];
                for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            }
        }
        return det;
    }

    /// Exhaustive check: alpha < alpha+gamma < gamma whenever alpha < gamma and
    /// alpha + gamma is a root.
    bool satisfies_betweenness() const {
        for (const Root& x : roots_)
            for (const Root& y : roots_) {
                if (!(x < y)) continue;
                Root sum;
                if (x.b == y.a)
                    sum = Root{x.a, y.b};
                else if (y.b == x.a)
                    sum = Root{y.a, x.b};
                else
                    continue;
                if (!(x < sum && sum < y)) return false;
            }
        return true;
    }

private:
    // (e_a - e_b | e_c - e_d) with (e_x | e_y) = s_x delta_xy
    long eps_form(int a, int b, int c, int d) const {
        auto e = [&](int x, int y) -> long { return x == y ? s_[x] : 0; };
        return e(a, c) - e(a, d) - e(b, c) + e(b, d);
    }

    ParitySequence s_;
    std::vector<std::vector<long>> cartan_;
    std::vector<std::vector<long>> reduced_cartan_;
    std::vector<Root> roots_;
    bool reduced_ = false;
};

}  // namespace imverma
