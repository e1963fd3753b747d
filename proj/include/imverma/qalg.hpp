#pragma once

// U_q of affine sl(m|n) in Drinfeld mode form: generator symbols, mode
// brackets, the K-mode expansion, PBWD root vectors built from iterated
// q-brackets, defining relations in mode form, and a windowed normal form for
// the negative part solved by exact linear algebra on words of simple letters.

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "imverma/diagmod.hpp"
#include "imverma/linalg.hpp"
#include "imverma/rootsys.hpp"

namespace imverma {

class WindowTooSmall : public AlgebraError {
public:
    using AlgebraError::AlgebraError;
};

/// Simple letter X^{+/-}_{i,k}; the side is fixed by context.
struct QLetter {
    int i = 0;
    int k = 0;
    friend auto operator<=>(const QLetter&, const QLetter&) = default;
};

using Word = std::vector<QLetter>;
using WordComb = LinComb<Word, Scalar>;

inline std::string word_str(const Word& w, int side = -1) {
    if (w.empty()) return "1";
    std::string out;
    for (const auto& l : w)
        out += std::string(side < 0 ? "X-(" : "X+(") + std::to_string(l.i) + "," + std::to_string(l.k) + ")";
    return out;
}

inline int word_degree(const Word& w) {
    int d = 0;
    for (const auto& l : w) d += l.k;
    return d;
}

inline int word_span(const Word& w) {
    int d = 0;
    for (const auto& l : w) d = std::max(d, std::abs(l.k));
    return d;
}

/// Number of letters of each color, as an element of Q^+.
inline RootLattice word_colors(const Word& w, int rank) {
    RootLattice c(static_cast<std::size_t>(rank), 0);
    for (const auto& l : w) ++c[static_cast<std::size_t>(l.i - 1)];
    return c;
}

inline WordComb concat(const WordComb& a, const WordComb& b) {
    WordComb out;
    for (auto& [wa, ca] : a.terms())
        for (auto& [wb, cb] : b.terms()) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            out.add(w, ca * cb);
        }
    return out;
}

inline WordComb letter(int i, int k) { return WordComb(Word{{i, k}}); }

/// (beta|gamma) for beta, gamma given in the simple-root basis.
inline long lattice_form(const RootData& rd, const RootLattice& x, const RootLattice& y) {
    long s = 0;
    for (int a = 1; a <= rd.rank(); ++a)
        for (int b = 1; b <= rd.rank(); ++b) s += x[a - 1] * y[b - 1] * rd.A(a, b);
    return s;
}

inline int lattice_parity(const RootData& rd, const RootLattice& x) {
    long p = 0;
    for (int a = 1; a <= rd.rank(); ++a) p += x[a - 1] * rd.simple_parity(a);
    return static_cast<int>(p % 2);
}

inline RootLattice lattice_sum(RootLattice x, const RootLattice& y) {
    for (std::size_t a = 0; a < x.size(); ++a) x[a] += y[a];
    return x;
}

// ---------------------------------------------------------------------------
// Generators

struct QGenerator {
    enum Kind { XPlus, XMinus, H, K, Kmode, QC, QD, Div };
    enum Target { OnK, OnC, OnD };

    Kind kind = K;
    int i = 0;
    int k = 0;  // mode index (X, H, Kmode) or shift (Div)
    int e = 1;  // exponent of K, q^c, q^d; sign of a K-mode
    int n = 1;  // Div order
    Target target = OnK;

    static QGenerator xplus(int i, int k) { return {XPlus, i, k}; }
    static QGenerator xminus(int i, int k) { return {XMinus, i, k}; }
    static QGenerator h(int i, int r) {
        if (r == 0) throw AlgebraError("H_{i,r} needs r != 0");
        return {H, i, r};
    }
    static QGenerator kgen(int i, int e = 1) { return {K, i, 0, e}; }
    /// K^{sign}_{i, sign*r}, r >= 0; the zero mode is K_i^{sign}.
    static QGenerator kmode(int i, int sign, int r) {
        if (r < 0) throw AlgebraError("K-mode magnitude must be >= 0");
        if (r == 0) return kgen(i, sign);
        return {Kmode, i, sign * r, sign};
    }
    static QGenerator qc(int e = 1) { return {QC, 0, 0, e}; }
    static QGenerator qd(int e = 1) { return {QD, 0, 0, e}; }
    /// {Y;k;n} with Y = K_i, q^c or q^d.
    static QGenerator div(Target t, int i, int k, int n) {
        if (n <= 0) throw AlgebraError("{Y;k;n} needs n > 0");
        return {Div, t == OnK ? i : 0, k, 1, n, t};
    }

    int parity(const RootData& rd) const { return kind == XPlus || kind == XMinus ? rd.simple_parity(i) : 0; }

    std::string str() const {
        auto ik = [&](const char* name) { return std::string(name) + "(" + std::to_string(i) + "," + std::to_string(k) + ")"; };
        switch (kind) {
            case XPlus:
                return ik("X+");
            case XMinus:
                return ik("X-");
            case H:
                return ik("H");
            case K:
                return "K(" + std::to_string(i) + (e > 0 ? ")" : ")^-1");
            case Kmode:
                return std::string(e > 0 ? "K+(" : "K-(") + std::to_string(i) + "," + std::to_string(k) + ")";
            case QC:
                return e > 0 ? "q^c" : "q^-c";
            case QD:
                return e > 0 ? "q^d" : "q^-d";
            default: {
                std::string y = target == OnK ? "K(" + std::to_string(i) + ")" : target == OnC ? "q^c" : "q^d";
                return "{" + y + ";" + std::to_string(k) + ";" + std::to_string(n) + "}";
            }
        }
    }
    friend auto operator<=>(const QGenerator&, const QGenerator&) = default;
};

using QElement = LinComb<QGenerator, Scalar>;

/// base * q^{c_exp * c}; at_level substitutes q^c = q^a.
struct CentralCoeff {
    Scalar base;
    long c_exp = 0;
    Scalar at_level(long a) const { return base * Scalar::q_power(static_cast<int>(c_exp * a)); }
    std::string str() const {
        if (c_exp == 0 || base.is_zero()) return base.str();
        return base.str() + "*q^(" + std::to_string(c_exp) + "c)";
    }
};

/// [H_{i,r}, X^{sign}_{j,l}] = coeff * X^{sign}_{j,l+r}.
inline CentralCoeff mode_bracket_HX(const RootData& rd, int i, int r, int sign, int j) {
    if (r == 0) throw AlgebraError("H_{i,r} needs r != 0");
    Scalar base = Scalar(sign) * qnum(static_cast<int>(r * rd.A(i, j))) / Scalar(r);
    long ce = -(r + sign * std::abs(r)) / 2;
    return {base, base.is_zero() ? 0 : ce};
}

/// [X^+_{i,k}, X^-_{j,l}] at level a, as a combination of K-modes.
inline QElement mode_bracket_XX(int i, int k, int j, int l, long a) {
    QElement out;
    if (i != j) return out;
    const int m = k + l;
    const Scalar inv = q_minus_qinv().inverse();
    if (m >= 0) out.add(QGenerator::kmode(i, 1, m), Scalar::q_power(static_cast<int>(k * a)) * inv);
    if (m <= 0) out.add(QGenerator::kmode(i, -1, -m), -Scalar::q_power(static_cast<int>(l * a)) * inv);
    return out;
}

/// Monomial in the H_{i,.} modes of one index i: the list of mode indices.
using HMonomial = std::vector<int>;

/// Coefficient of z^{-sign r} in exp(coef_sign (q - q^{-1}) sum_{s>0} H_{i,sign s} z^{-sign s}).
inline LinComb<HMonomial, Scalar> exp_series_coeff(int coef_sign, int sign, int r) {
    LinComb<HMonomial, Scalar> out;
    const Scalar x = Scalar(coef_sign) * q_minus_qinv();
    // partitions of r into nonincreasing parts
    std::vector<int> parts;
    auto rec = [&](auto&& self, int rem, int maxp) -> void {
        if (rem == 0) {
            Scalar c = 1;
            HMonomial mono;
            for (std::size_t a = 0; a < parts.size();) {
                std::size_t b = a;
                while (b < parts.size() && parts[b] == parts[a]) ++b;
                const int mult = static_cast<int>(b - a);
                Integer fact = 1;
                for (int t = 2; t <= mult; ++t) fact *= t;
                c = c * x.pow(mult) / Scalar(fact);
                a = b;
            }
            for (int p : parts) mono.push_back(sign * p);
            std::sort(mono.begin(), mono.end());
            out.add(mono, c);
            return;
        }
        for (int p = std::min(rem, maxp); p >= 1; --p) {
            parts.push_back(p);
            self(self, rem - p, p);
            parts.pop_back();
        }
    };
    rec(rec, r, r);
    return out;
}

/// K^{sign}_{i, sign r} = K_i^{sign} * (returned polynomial in H_{i, sign s}).
inline LinComb<HMonomial, Scalar> kmode_expand(int sign, int r) {
    if (r < 0) throw AlgebraError("K-mode magnitude must be >= 0");
    return exp_series_coeff(sign, sign, r);
}

// ---------------------------------------------------------------------------
// PBWD root vectors

struct PBWDChoice {
    std::vector<int> degrees;  // r_1 + ... + r_p = r
    std::vector<int> q_signs;  // q_j = q^{q_signs[j]}
};

struct PBWDConfig {
    enum class Split { First, Last };
    Split split = Split::First;
    int q_sign = -1;
    std::map<std::pair<Root, int>, PBWDChoice> overrides;

    static PBWDConfig alternate() {
        PBWDConfig c;
        c.split = Split::Last;
        c.q_sign = 1;
        return c;
    }

    PBWDChoice choice(const Root& alpha, int r) const {
        auto it = overrides.find({alpha, r});
        const int p = alpha.b - alpha.a;
        if (it != overrides.end()) {
            const auto& ch = it->second;
            if (static_cast<int>(ch.degrees.size()) != p || static_cast<int>(ch.q_signs.size()) != p - 1 ||
                std::accumulate(ch.degrees.begin(), ch.degrees.end(), 0) != r)
                throw AlgebraError("PBWD override does not match " + alpha.str());
            return ch;
        }
        PBWDChoice ch;
        ch.degrees.assign(static_cast<std::size_t>(p), 0);
        ch.degrees[split == Split::First ? 0 : static_cast<std::size_t>(p - 1)] = r;
        ch.q_signs.assign(static_cast<std::size_t>(p - 1), q_sign);
        return ch;
    }

    std::string str() const {
        std::string s = split == Split::First ? "split=first" : "split=last";
        s += q_sign < 0 ? ",q^-1" : ",q";
        if (!overrides.empty()) s += ",overrides=" + std::to_string(overrides.size());
        return s;
    }
};

/// X_{alpha,r} = [..[[X_{i1,r1}, X_{i2,r2}]_{q1}, X_{i3,r3}]_{q2} ..] expanded into words.
inline WordComb pbwd_root_vector(const RootData& rd, const Root& alpha, int r, const PBWDConfig& cfg = {}) {
    rd.check(alpha);
    const auto ch = cfg.choice(alpha, r);
    WordComb cur = letter(alpha.a, ch.degrees[0]);
    int par = rd.simple_parity(alpha.a);
    for (int j = 1; j < alpha.b - alpha.a; ++j) {
        const int i = alpha.a + j;
        const int pi = rd.simple_parity(i);
        WordComb y = letter(i, ch.degrees[static_cast<std::size_t>(j)]);
        Scalar c = Scalar((par * pi) % 2 ? -1 : 1) * Scalar::q_power(ch.q_signs[static_cast<std::size_t>(j - 1)]);
        cur = concat(cur, y) - c * concat(y, cur);
        par = (par + pi) % 2;
    }
    return cur;
}

/// Ordered PBWD monomial: decreasing product on the minus side, increasing on the plus side.
inline WordComb pbwd_monomial(const RootData& rd, const MonomialIndex& m, int side = -1, const PBWDConfig& cfg = {}) {
    WordComb out(Word{});
    auto mul = [&](const Position& p, int e) {
        WordComb x = pbwd_root_vector(rd, p.root, p.degree, cfg);
        for (int t = 0; t < e; ++t) out = concat(out, x);
    };
    const auto& en = m.entries();
    if (side < 0)
        for (auto it = en.rbegin(); it != en.rend(); ++it) mul(it->first, it->second);
    else
        for (auto& [p, e] : en) mul(p, e);
    return out;
}

// ---------------------------------------------------------------------------
// Relations

struct RelationInstance {
    enum Kind { Quadratic, Commuting, Serre3, Serre4 };
    Kind kind = Quadratic;
    std::vector<int> colors;   // letter colors in display order
    std::vector<int> indices;  // mode indices of the display
    WordComb body;

    std::string str() const {
        static const char* names[] = {"quadratic", "commuting", "serre3", "serre4"};
        std::string s = names[kind];
        s += "[";
        for (std::size_t a = 0; a < colors.size(); ++a)
            s += (a ? "," : "") + std::to_string(colors[a]) + ":" + std::to_string(indices[a]);
        return s + "]";
    }
};

/// <X, Y> = XY - (-1)^{|X||Y|} q^{-(wx|wy)} YX.
inline WordComb qbracket(const RootData& rd, const WordComb& x, const RootLattice& wx, const WordComb& y,
                         const RootLattice& wy) {
    Scalar c = Scalar(lattice_parity(rd, wx) * lattice_parity(rd, wy) ? -1 : 1) *
               Scalar::q_power(static_cast<int>(-lattice_form(rd, wx, wy)));
    return concat(x, y) - c * concat(y, x);
}

inline RootLattice simple_weight(const RootData& rd, int i) {
    RootLattice w(static_cast<std::size_t>(rd.rank()), 0);
    w[static_cast<std::size_t>(i - 1)] = 1;
    return w;
}

/// Quadratic instance (i,j,k,l): coefficient of z^{-k} w^{-l} in the display.
inline RelationInstance quadratic_instance(const RootData& rd, int side, int i, int j, int k, int l) {
    const Scalar qa = Scalar::q_power(static_cast<int>(side * rd.A(i, j)));
    const Scalar sg = Scalar(rd.simple_parity(i) * rd.simple_parity(j) ? -1 : 1);
    WordComb b = concat(letter(i, k + 1), letter(j, l)) - qa * concat(letter(i, k), letter(j, l + 1));
    b.add(concat(letter(j, l + 1), letter(i, k)), sg);
    b.add(concat(letter(j, l), letter(i, k + 1)), -sg * qa);
    return {RelationInstance::Quadratic, {i, j}, {k, l}, b};
}

inline RelationInstance commuting_instance(const RootData& rd, int i, int j, int k, int l) {
    const Scalar sg = Scalar(rd.simple_parity(i) * rd.simple_parity(j) ? -1 : 1);
    WordComb b = concat(letter(i, k), letter(j, l)) - sg * concat(letter(j, l), letter(i, k));
    return {RelationInstance::Commuting, {i, j}, {k, l}, b};
}

/// Sym_{z1,z2} <X_i(z1), <X_i(z2), X_j(w)>>.
inline RelationInstance serre3_instance(const RootData& rd, int i, int j, int k1, int k2, int l) {
    WordComb b;
    const auto wi = simple_weight(rd, i), wj = simple_weight(rd, j);
    for (auto [x, y] : {std::pair{k1, k2}, std::pair{k2, k1}}) {
        WordComb inner = qbracket(rd, letter(i, y), wi, letter(j, l), wj);
        b.add(qbracket(rd, letter(i, x), wi, inner, lattice_sum(wi, wj)));
    }
    return {RelationInstance::Serre3, {i, i, j}, {k1, k2, l}, b};
}

/// Sym_{z1,z2} <X_i(z1), <X_{i+1}(y), <X_i(z2), X_{i-1}(w)>>>.
inline RelationInstance serre4_instance(const RootData& rd, int i, int k1, int m, int k2, int l) {
    WordComb b;
    const auto wi = simple_weight(rd, i), wu = simple_weight(rd, i + 1), wd = simple_weight(rd, i - 1);
    for (auto [x, y] : {std::pair{k1, k2}, std::pair{k2, k1}}) {
        WordComb in1 = qbracket(rd, letter(i, y), wi, letter(i - 1, l), wd);
        auto w1 = lattice_sum(wi, wd);
        WordComb in2 = qbracket(rd, letter(i + 1, m), wu, in1, w1);
        b.add(qbracket(rd, letter(i, x), wi, in2, lattice_sum(wu, w1)));
    }
    return {RelationInstance::Serre4, {i, i + 1, i, i - 1}, {k1, m, k2, l}, b};
}

/// Unpadded relation instances whose letters have colors exactly M, total
/// degree n and all letter degrees in [-Dp, Dp].
inline std::vector<RelationInstance> base_relations(const RootData& rd, int side, const RootLattice& M, int n, int Dp) {
    std::vector<RelationInstance> out;
    const int r = rd.rank();
    const long h = std::accumulate(M.begin(), M.end(), 0L);
    auto in = [&](int x) { return std::abs(x) <= Dp; };
    std::vector<int> letters;
    for (int i = 1; i <= r; ++i)
        for (long t = 0; t < M[i - 1]; ++t) letters.push_back(i);
    if (h == 2) {
        const int i = letters[0], j = letters[1];
        if (rd.A(i, j) != 0) {
            for (int k = -Dp; k <= Dp; ++k) {
                const int l = n - 1 - k;
                if (i == j && l < k) continue;
                if (in(k) && in(k + 1) && in(l) && in(l + 1)) out.push_back(quadratic_instance(rd, side, i, j, k, l));
            }
        } else {
            for (int k = -Dp; k <= Dp; ++k) {
                const int l = n - k;
                if (i == j && l < k) continue;
                if (in(l)) out.push_back(commuting_instance(rd, i, j, k, l));
            }
        }
    } else if (h == 3) {
        for (int i = 1; i <= r; ++i) {
            if (M[i - 1] != 2 || rd.A(i, i) == 0) continue;
            for (int j : {i - 1, i + 1}) {
                if (j < 1 || j > r || M[j - 1] != 1) continue;
                for (int k1 = -Dp; k1 <= Dp; ++k1)
                    for (int k2 = k1; k2 <= Dp; ++k2)
                        if (in(n - k1 - k2)) out.push_back(serre3_instance(rd, i, j, k1, k2, n - k1 - k2));
            }
        }
    } else if (h == 4) {
        for (int i = 2; i < r; ++i) {
            if (M[i - 1] != 2 || M[i - 2] != 1 || M[i] != 1 || rd.A(i, i) != 0) continue;
            for (int k1 = -Dp; k1 <= Dp; ++k1)
                for (int k2 = k1; k2 <= Dp; ++k2)
                    for (int m = -Dp; m <= Dp; ++m)
                        if (in(n - k1 - k2 - m)) out.push_back(serre4_instance(rd, i, k1, m, k2, n - k1 - k2 - m));
        }
    }
    return out;
}

/// All words with colors C, total degree n and letters in [-Dp, Dp].
inline std::vector<Word> window_words(const RootLattice& C, int n, int Dp) {
    std::vector<Word> out;
    RootLattice rem = C;
    long left = std::accumulate(C.begin(), C.end(), 0L);
    Word cur;
    auto rec = [&](auto&& self, int nrem) -> void {
        if (left == 0) {
            if (nrem == 0) out.push_back(cur);
            return;
        }
        for (std::size_t i = 0; i < rem.size(); ++i) {
            if (rem[i] == 0) continue;
            --rem[i];
            --left;
            for (int k = -Dp; k <= Dp; ++k) {
                if (std::abs(nrem - k) > left * Dp) continue;
                cur.push_back({static_cast<int>(i) + 1, k});
                self(self, nrem - k);
                cur.pop_back();
            }
            ++rem[i];
            ++left;
        }
    };
    rec(rec, n);
    return out;
}

namespace detail {

inline void sub_lattices(const RootLattice& C, const std::function<void(const RootLattice&)>& f) {
    RootLattice cur(C.size(), 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == C.size()) {
            f(cur);
            return;
        }
        for (long t = 0; t <= C[i]; ++t) {
            cur[i] = t;
            self(self, i + 1);
        }
        cur[i] = 0;
    };
    rec(rec, 0);
}

inline RootLattice lattice_diff(RootLattice x, const RootLattice& y) {
    for (std::size_t a = 0; a < x.size(); ++a) x[a] -= y[a];
    return x;
}

}  // namespace detail

/// Every padded instance L * R * S with colors C, total degree n and letters in
/// [-Dp, Dp], passed to f.
inline void for_each_relation_instance(const RootData& rd, int side, const RootLattice& C, int n, int Dp,
                                       const std::function<void(const WordComb&)>& f) {
    detail::sub_lattices(C, [&](const RootLattice& M) {
        const long hm = height(M);
        if (hm < 2 || hm > 4) return;
        RootLattice rest = detail::lattice_diff(C, M);
        const long hr = height(rest);
        for (int nm = static_cast<int>(-hm * Dp); nm <= hm * Dp; ++nm) {
            auto base = base_relations(rd, side, M, nm, Dp);
            if (base.empty()) continue;
            detail::sub_lattices(rest, [&](const RootLattice& L) {
                RootLattice R = detail::lattice_diff(rest, L);
                const long hl = height(L);
                for (int nl = static_cast<int>(-hl * Dp); nl <= hl * Dp; ++nl) {
                    const int nr = n - nm - nl;
                    if (std::abs(nr) > (hr - hl) * Dp) continue;
                    auto lw = window_words(L, nl, Dp);
                    auto rw = window_words(R, nr, Dp);
                    for (const auto& a : lw)
                        for (const auto& rel : base)
                            for (const auto& b : rw) f(concat(concat(WordComb(a), rel.body), WordComb(b)));
                }
            });
        }
    });
}

inline std::vector<WordComb> relation_instances(const RootData& rd, int side, const RootLattice& C, int n, int Dp) {
    std::vector<WordComb> out;
    for_each_relation_instance(rd, side, C, n, Dp, [&](const WordComb& x) { out.push_back(x); });
    return out;
}

/// PBWD monomials with weight C and total degree n whose expansions only use
/// letters in [-Dp, Dp].
inline std::vector<MonomialIndex> window_pbwd_monomials(const RootData& rd, const RootLattice& C, int n, int Dp,
                                                        const PBWDConfig& cfg = {}) {
    std::vector<Position> pos;
    for (const Root& a : rd.positive_roots())
        for (int r = -Dp * (a.b - a.a); r <= Dp * (a.b - a.a); ++r) {
            auto ch = cfg.choice(a, r);
            if (std::all_of(ch.degrees.begin(), ch.degrees.end(), [&](int d) { return std::abs(d) <= Dp; }))
                pos.push_back({a, r});
        }
    std::vector<MonomialIndex> out;
    MonomialIndex cur;
    RootLattice rem = C;
    auto rec = [&](auto&& self, std::size_t from, int nrem) -> void {
        if (std::all_of(rem.begin(), rem.end(), [](long x) { return x == 0; })) {
            if (nrem == 0) out.push_back(cur);
            return;
        }
        for (std::size_t t = from; t < pos.size(); ++t) {
            const Position& p = pos[t];
            auto co = rd.coordinates(p.root);
            bool fits = true;
            for (std::size_t a = 0; a < rem.size(); ++a) fits = fits && co[a] <= rem[a];
            if (!fits) continue;
            for (std::size_t a = 0; a < rem.size(); ++a) rem[a] -= co[a];
            cur.add(p, 1);
            self(self, rd.parity(p.root) ? t + 1 : t, nrem - p.degree);
            cur.add(p, -1);
            for (std::size_t a = 0; a < rem.size(); ++a) rem[a] += co[a];
        }
    };
    rec(rec, 0, n);
    return out;
}

// ---------------------------------------------------------------------------
// Windowed normal form

using PBWDCoords = LinComb<MonomialIndex, Scalar>;

struct PBWDRankRow {
    int n = 0;
    std::size_t words = 0;
    std::size_t relations = 0;
    std::size_t relation_rank = 0;
    std::size_t pbwd = 0;
    std::size_t quotient_dim = 0;
    std::size_t inner_words = 0;
    std::size_t pbwd_rank = 0;  // rank of the PBWD expansions modulo the relations
    bool independent = true;
    bool inner_spanned = true;
    std::string offending;  // first inner word outside the span, if any

    bool count_match() const { return pbwd_rank == pbwd; }
    std::size_t codimension() const { return quotient_dim - pbwd_rank; }
    bool pass() const { return independent && inner_spanned && count_match(); }
};

struct PBWDRankReport {
    RootLattice beta;
    int D = 0;
    int Dp = 0;
    std::string config;
    std::vector<PBWDRankRow> rows;

    bool pass() const {
        return std::all_of(rows.begin(), rows.end(), [](const PBWDRankRow& r) { return r.pass(); });
    }
};

/// Normal form of the negative part. For a weight block (colors, total degree)
/// and window D', the relation instances are eliminated first; the PBWD
/// monomial expansions reduced modulo them form a tracked echelon basis in
/// which a reduced word is expressed. Blocks are cached; results are unique, so
/// the cache never changes answers.
class NormalFormEngine {
public:
    struct Options {
        int extra = 2;            // D' runs from the letters' window up to window + ht + extra
        unsigned shuffle_seed = 0;  // nonzero: insert relation instances in shuffled order
    };

    explicit NormalFormEngine(RootData rd, PBWDConfig cfg = {}) : NormalFormEngine(std::move(rd), std::move(cfg), Options{}) {}
    NormalFormEngine(RootData rd, PBWDConfig cfg, Options opt)
        : rd_(std::make_shared<RootData>(std::move(rd))),
          cfg_(std::move(cfg)),
          opt_(opt),
          cache_(std::make_shared<Cache>()) {}

    const RootData& root_data() const noexcept { return *rd_; }
    const PBWDConfig& config() const noexcept { return cfg_; }

    WordComb expand(const MonomialIndex& m, int side = -1) const { return pbwd_monomial(*rd_, m, side, cfg_); }

    WordComb expand(const PBWDCoords& x, int side = -1) const {
        WordComb out;
        for (auto& [m, c] : x.terms()) out.add(expand(m, side), c);
        return out;
    }

    /// PBWD coordinates of a single word, starting from window D.
    PBWDCoords normal_form(const Word& w, int D = 0) const {
        {
            std::lock_guard<std::mutex> lock(cache_->m);
            auto it = cache_->words.find(w);
            if (it != cache_->words.end()) return it->second;
        }
        const RootLattice C = word_colors(w, rd_->rank());
        const int n = word_degree(w);
        const int start = std::max(D, word_span(w));
        const int stop = start + static_cast<int>(height(C)) + opt_.extra;
        for (int Dp = start; Dp <= stop; ++Dp) {
            auto b = block(C, n, Dp);
            if (!b->independent)
                throw AlgebraError("PBWD monomials dependent in window (D' = " + std::to_string(Dp) + ")");
            SparseVec<Scalar> v{{b->index.at(w), Scalar(1)}};
            b->rel.reduce(v);
            auto ex = b->pbwd.express(v);
            if (!ex) continue;
            PBWDCoords out;
            for (auto& [id, c] : *ex) out.add(b->monos[static_cast<std::size_t>(id)], c);
            std::lock_guard<std::mutex> lock(cache_->m);
            cache_->words.emplace(w, out);
            return out;
        }
        throw WindowTooSmall("window too small, enlarge D' (word " + word_str(w) + ", tried D' <= " +
                             std::to_string(stop) + ")");
    }

    PBWDCoords normal_form(const WordComb& x, int D = 0) const {
        PBWDCoords out;
        for (auto& [w, c] : x.terms()) out.add(normal_form(w, D), c);
        return out;
    }

    /// Windowed check that PBWD expansions are independent modulo the relations
    /// and span every word with letters in [-D, D].
    PBWDRankReport rank_check(const RootLattice& beta, int D) const {
        PBWDRankReport rep;
        rep.beta = beta;
        rep.D = D;
        const long h = height(beta);
        rep.Dp = D + static_cast<int>(h);
        rep.config = cfg_.str();
        for (int n = static_cast<int>(-h * D); n <= h * D; ++n) {
            auto b = block(beta, n, rep.Dp);
            PBWDRankRow row;
            row.n = n;
            row.words = b->words.size();
            row.relations = b->relation_count;
            row.relation_rank = b->rel.rank();
            row.pbwd = b->monos.size();
            row.quotient_dim = row.words - row.relation_rank;
            row.independent = b->independent;
            row.pbwd_rank = b->pbwd.rank();
            for (const Word& w : window_words(beta, n, D)) {
                ++row.inner_words;
                SparseVec<Scalar> v{{b->index.at(w), Scalar(1)}};
                b->rel.reduce(v);
                if (!b->pbwd.contains(v)) {
                    row.inner_spanned = false;
                    if (row.offending.empty()) row.offending = word_str(w);
                }
            }
            rep.rows.push_back(std::move(row));
        }
        return rep;
    }

private:
    struct Block {
        std::map<Word, int> index;
        std::vector<Word> words;
        Echelon<Scalar> rel{false};
        Echelon<Scalar> pbwd{true};
        std::vector<MonomialIndex> monos;
        std::size_t relation_count = 0;
        bool independent = true;
    };
    struct Cache {
        std::mutex m;
        std::map<std::tuple<RootLattice, int, int>, std::shared_ptr<Block>> blocks;
        std::map<Word, PBWDCoords> words;
    };

    SparseVec<Scalar> sparse(const Block& b, const WordComb& x) const {
        SparseVec<Scalar> v;
        for (auto& [w, c] : x.terms()) v.emplace(b.index.at(w), c);
        return v;
    }

    /// Words out of PBWD order get the small column ids so elimination removes them first.
    int disorder(const Word& w) const {
        int d = 0;
        for (std::size_t a = 0; a < w.size(); ++a)
            for (std::size_t b = a + 1; b < w.size(); ++b)
                if (std::tie(w[a].i, w[a].k) < std::tie(w[b].i, w[b].k)) ++d;
        return d;
    }

    std::shared_ptr<Block> block(const RootLattice& C, int n, int Dp) const {
        auto key = std::make_tuple(C, n, Dp);
        std::lock_guard<std::mutex> lock(cache_->m);
        auto it = cache_->blocks.find(key);
        if (it != cache_->blocks.end()) return it->second;
        auto b = std::make_shared<Block>();
        b->words = window_words(C, n, Dp);
        std::stable_sort(b->words.begin(), b->words.end(),
                         [&](const Word& x, const Word& y) { return disorder(x) > disorder(y); });
        for (std::size_t t = 0; t < b->words.size(); ++t) b->index.emplace(b->words[t], static_cast<int>(t));
        std::vector<WordComb> rels = relation_instances(*rd_, -1, C, n, Dp);
        if (opt_.shuffle_seed != 0) {
            std::mt19937 rng(opt_.shuffle_seed);
            std::shuffle(rels.begin(), rels.end(), rng);
        }
        b->relation_count = rels.size();
        for (const auto& r : rels) b->rel.insert(sparse(*b, r));
        b->monos = window_pbwd_monomials(*rd_, C, n, Dp, cfg_);
        for (std::size_t t = 0; t < b->monos.size(); ++t) {
            auto v = sparse(*b, expand(b->monos[t]));
            b->rel.reduce(v);
            if (!b->pbwd.insert(std::move(v), static_cast<int>(t))) b->independent = false;
        }
        cache_->blocks.emplace(key, b);
        return b;
    }

    std::shared_ptr<RootData> rd_;
    PBWDConfig cfg_;
    Options opt_;
    std::shared_ptr<Cache> cache_;
};

}  // namespace imverma
