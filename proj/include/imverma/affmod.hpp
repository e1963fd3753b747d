#pragma once

// Classical affine superalgebra sl(m|n)^ in its matrix realization, induced
// modules M(lambda, V) with PBW straightening, height reduction, cyclicity
// certificates and the Kac-module graded comparison.

#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "imverma/diagmod.hpp"

namespace imverma {

using RMatrix = Matrix<Rational>;

/// Generators of the loop algebra: x^+_{alpha,k}, x^-_{alpha,k}, h_{i,r}
/// (r = 0 is the Cartan element h_i), c and d.
struct LoopGenerator {
    enum Kind { XPlus, XMinus, H, C, D };
    Kind kind = C;
    Root root{};
    int i = 0;
    int deg = 0;

    static LoopGenerator xplus(Root a, int k) { return {XPlus, a, 0, k}; }
    static LoopGenerator xminus(Root a, int k) { return {XMinus, a, 0, k}; }
    static LoopGenerator h(int i, int r) { return {H, Root{}, i, r}; }
    static LoopGenerator cartan(int i) { return {H, Root{}, i, 0}; }
    static LoopGenerator c() { return {C, Root{}, 0, 0}; }
    static LoopGenerator d() { return {D, Root{}, 0, 0}; }

    Position position() const { return Position{root, deg}; }
    std::string str() const {
        switch (kind) {
            case XPlus:
                return "x+(" + root.str() + "," + std::to_string(deg) + ")";
            case XMinus:
                return "x-(" + root.str() + "," + std::to_string(deg) + ")";
            case H:
                return "h(" + std::to_string(i) + "," + std::to_string(deg) + ")";
            case C:
                return "c";
            default:
                return "d";
        }
    }
    friend auto operator<=>(const LoopGenerator&, const LoopGenerator&) = default;
};

using LoopElement = LinComb<LoopGenerator, Rational>;

/// Structure constants of sl(m|n)^ computed from N x N matrices.
class AffineAlgebra {
public:
    explicit AffineAlgebra(RootData rd) : rd_(std::move(rd)), cache_(std::make_shared<Cache>()) {
        const int N = rd_.N();
        for (int i = 1; i <= rd_.rank(); ++i) {
            RMatrix xp = zero(), xm = zero(), h = zero();
            xp[i - 1][i] = 1;
            xm[i][i - 1] = rd_.parity()[i];
            h[i - 1][i - 1] = rd_.parity()[i];
            h[i][i] = -rd_.parity()[i + 1];
            plus_[Root{i, i + 1}] = xp;
            minus_[Root{i, i + 1}] = xm;
            h_.push_back(h);
        }
        // non-simple root vectors: iterated brackets along the simple chain
        for (int len = 2; len < N; ++len)
            for (int a = 1; a + len <= N; ++a) {
                Root prev{a, a + len - 1}, r{a, a + len}, s{a + len - 1, a + len};
                int pp = rd_.parity(prev), ps = rd_.parity(s);
                plus_[r] = super_commutator(plus_[prev], pp, plus_[s], ps);
                minus_[r] = super_commutator(minus_[prev], pp, minus_[s], ps);
            }
    }

    const RootData& root_data() const noexcept { return rd_; }
    const RMatrix& xplus_matrix(const Root& r) const { return plus_.at(r); }
    const RMatrix& xminus_matrix(const Root& r) const { return minus_.at(r); }
    const RMatrix& h_matrix(int i) const { return h_.at(static_cast<std::size_t>(i - 1)); }

    int parity(const LoopGenerator& g) const {
        return (g.kind == LoopGenerator::XPlus || g.kind == LoopGenerator::XMinus) ? rd_.parity(g.root) : 0;
    }

    /// The matrix part of a generator (zero for c and d).
    RMatrix matrix(const LoopGenerator& g) const {
        switch (g.kind) {
            case LoopGenerator::XPlus:
                return plus_.at(g.root);
            case LoopGenerator::XMinus:
                return minus_.at(g.root);
            case LoopGenerator::H:
                return h_matrix(g.i);
            default:
                return zero();
        }
    }

    /// Supertrace form (x|y) = sum_a s_a (xy)_aa.
    Rational form(const RMatrix& x, const RMatrix& y) const {
        Rational acc = 0;
        for (int a = 0; a < rd_.N(); ++a)
            for (int b = 0; b < rd_.N(); ++b) acc += rd_.parity()[a + 1] * x[a][b] * y[b][a];
        return acc;
    }

    /// [x, y] = xy - (-1)^{|x||y|} yx on homogeneous matrices.
    RMatrix super_commutator(const RMatrix& x, int px, const RMatrix& y, int py) const {
        RMatrix xy = multiply(x, y), yx = multiply(y, x);
        Rational sgn = (px & py) ? -1 : 1;
        for (int a = 0; a < rd_.N(); ++a)
            for (int b = 0; b < rd_.N(); ++b) xy[a][b] -= sgn * yx[a][b];
        return xy;
    }

    /// Expansion of a supertrace-zero matrix in the basis x^+_alpha, x^-_alpha, h_i (degree k).
    LoopElement decompose(const RMatrix& m, int k) const {
        LoopElement out;
        const int N = rd_.N();
        for (int a = 1; a <= N; ++a)
            for (int b = a + 1; b <= N; ++b) {
                Root r{a, b};
                if (m[a - 1][b - 1] != 0)
                    out.add(LoopGenerator::xplus(r, k), m[a - 1][b - 1] / plus_.at(r)[a - 1][b - 1]);
                if (m[b - 1][a - 1] != 0)
                    out.add(LoopGenerator::xminus(r, k), m[b - 1][a - 1] / minus_.at(r)[b - 1][a - 1]);
            }
        Rational c = 0, str = 0;
        for (int a = 1; a <= N; ++a) str += rd_.parity()[a] * m[a - 1][a - 1];
        if (str != 0) throw AlgebraError("matrix is not in sl(m|n): nonzero supertrace");
        for (int i = 1; i < N; ++i) {
            c += rd_.parity()[i] * m[i - 1][i - 1];
            out.add(LoopGenerator::h(i, k), c);
        }
        return out;
    }

    /// Affine super-bracket [x_m, y_n] = [x,y]_{m+n} + m delta_{m,-n} (x|y) c, [d, x_m] = m x_m.
    LoopElement bracket(const LoopGenerator& g, const LoopGenerator& h) const {
        {
            std::lock_guard<std::mutex> lock(cache_->m);
            auto it = cache_->brackets.find({g, h});
            if (it != cache_->brackets.end()) return it->second;
        }
        LoopElement out = compute_bracket(g, h);
        std::lock_guard<std::mutex> lock(cache_->m);
        cache_->brackets.emplace(std::make_pair(g, h), out);
        return out;
    }

    LoopElement bracket(const LoopElement& x, const LoopElement& y) const {
        LoopElement out;
        for (auto& [g, cg] : x.terms())
            for (auto& [h, ch] : y.terms()) out.add(bracket(g, h), cg * ch);
        return out;
    }

    /// (x^+_alpha | x^-_alpha).
    Rational root_pairing(const Root& r) const { return form(plus_.at(r), minus_.at(r)); }

    /// h_alpha = [x^+_alpha, x^-_alpha] in the h_i basis.
    std::vector<Rational> coroot(const Root& r) const {
        int p = rd_.parity(r);
        auto e = decompose(super_commutator(plus_.at(r), p, minus_.at(r), p), 0);
        std::vector<Rational> out(static_cast<std::size_t>(rd_.rank()), 0);
        for (auto& [g, c] : e.terms()) out[g.i - 1] = c;
        return out;
    }

private:
    RMatrix zero() const { return RMatrix(rd_.N(), std::vector<Rational>(rd_.N(), 0)); }

    LoopElement compute_bracket(const LoopGenerator& g, const LoopGenerator& h) const {
        using K = LoopGenerator;
        if (g.kind == K::C || h.kind == K::C) return {};
        if (g.kind == K::D && h.kind == K::D) return {};
        if (g.kind == K::D) return LoopElement(h, Rational(h.deg));
        if (h.kind == K::D) return LoopElement(g, Rational(-g.deg));
        int pg = parity(g), ph = parity(h);
        RMatrix mg = matrix(g), mh = matrix(h);
        LoopElement out = decompose(super_commutator(mg, pg, mh, ph), g.deg + h.deg);
        if (g.deg + h.deg == 0 && g.deg != 0) out.add(K::c(), Rational(g.deg) * form(mg, mh));
        return out;
    }

    struct Cache {
        std::mutex m;
        std::map<std::pair<LoopGenerator, LoopGenerator>, LoopElement> brackets;
    };

    RootData rd_;
    std::map<Root, RMatrix> plus_, minus_;
    std::vector<RMatrix> h_;
    std::shared_ptr<Cache> cache_;
};

using InducedBasis = std::pair<MonomialIndex, DiagLabel>;
using InducedVector = LinComb<InducedBasis, Rational>;
using MonomialComb = LinComb<MonomialIndex, Rational>;

/// One step of a cyclicity certificate.
struct CertStep {
    enum Kind { Raise, Phi, Project };
    Kind kind = Raise;
    LoopGenerator g{};
    int i = 0;
    int r = 0;
    Rational e = 0;

    std::string str() const {
        if (kind == Raise) return g.str();
        if (kind == Phi) return "phi(" + std::to_string(i) + "," + std::to_string(r) + ")";
        return "project(" + std::to_string(i) + "," + std::to_string(r) + "," + e.get_str() + ")";
    }
};

struct CyclicityCertificate {
    enum Status { Certified, Submodule, Inconclusive };
    Status status = Inconclusive;
    std::vector<CertStep> steps;
    Rational scalar = 0;       // final vector = scalar * v_{mu,a}
    InducedVector witness;     // stuck vector in 1 (x) V when status == Submodule
    std::string reason;
};

struct HtReduction {
    LoopGenerator g;
    InducedVector result;
    int ell = 0;
};

/// Graded comparison row: weight lambda - beta + n delta.
struct KacRow {
    RootLattice beta;
    long n = 0;
    std::size_t direct = 0;
    std::size_t product = 0;
};

struct KacReport {
    std::vector<KacRow> rows;
    bool pass() const {
        for (auto& r : rows)
            if (r.direct != r.product) return false;
        return true;
    }
};

/// The induced module M(lambda, V) = Ind(P, sl(m|n)^; V).
class InducedModule {
public:
    InducedModule(AffineAlgebra alg, Weight lambda, DiagModule<Rational> V)
        : alg_(std::make_shared<AffineAlgebra>(std::move(alg))),
          lambda_(std::move(lambda)),
          V_(std::move(V)),
          cache_(std::make_shared<Cache>()) {
        const auto& rd = alg_->root_data();
        if (rd.is_reduced()) throw AlgebraError("induced modules require m != n");
        if (static_cast<int>(lambda_.h.size()) != rd.rank())
            throw AlgebraError("weight must give a value on every h_i");
        if (lambda_.c != Rational(V_.level()))
            throw AlgebraError("lambda(c) must equal the level of V");
        if (V_.rank() != rd.rank()) throw AlgebraError("V must be a module over the full Heisenberg algebra");
    }

    const AffineAlgebra& algebra() const noexcept { return *alg_; }
    const RootData& root_data() const noexcept { return alg_->root_data(); }
    const Weight& weight() const noexcept { return lambda_; }
    const DiagModule<Rational>& V() const noexcept { return V_; }
    Rational level() const { return lambda_.c; }

    static InducedVector from_diag(const DiagVector<Rational>& w) {
        InducedVector out;
        for (auto& [l, c] : w.terms()) out.add({MonomialIndex{}, l}, c);
        return out;
    }

    /// x^-_{pos} * x^-_m, straightened into canonical decreasing order.
    MonomialComb mult_letter(const Position& y, const MonomialIndex& m) const {
        {
            std::lock_guard<std::mutex> lock(cache_->m);
            auto it = cache_->mult.find({y, m});
            if (it != cache_->mult.end()) return it->second;
        }
        MonomialComb out = compute_mult(y, m);
        std::lock_guard<std::mutex> lock(cache_->m);
        cache_->mult.emplace(std::make_pair(y, m), out);
        return out;
    }

    MonomialComb mult_letter(const Position& y, const MonomialComb& x) const {
        MonomialComb out;
        for (auto& [m, c] : x.terms()) out.add(mult_letter(y, m), c);
        return out;
    }

    /// Generator action on a basis vector x^-_m (x) v.
    InducedVector apply(const LoopGenerator& g, const MonomialIndex& m, const DiagLabel& l) const {
        using K = LoopGenerator;
        InducedVector out;
        switch (g.kind) {
            case K::C:
                out.add({m, l}, lambda_.c);
                return out;
            case K::D:
                out.add({m, l}, lambda_.d + Rational(m.total_degree() + l.degree()));
                return out;
            case K::XMinus:
                for (auto& [mm, c] : mult_letter(g.position(), m).terms()) out.add({mm, l}, c);
                return out;
            case K::H:
                if (g.deg == 0) {
                    Rational v = lambda_.h.at(static_cast<std::size_t>(g.i - 1));
                    for (auto& [p, e] : m.entries())
                        for (int j = p.root.a; j < p.root.b; ++j) v -= e * root_data().A(g.i, j);
                    out.add({m, l}, v);
                    return out;
                }
                break;
            default:
                break;
        }
        if (m.empty()) {
            if (g.kind == K::XPlus) return out;
            for (auto& [ll, c] : V_.h_act(g.i, g.deg, l).terms()) out.add({m, ll}, c);
            return out;
        }
        // g W1 rest = (-1)^{|g||W1|} W1 (g rest) + [g, W1] rest
        Position w1 = m.entries().rbegin()->first;
        MonomialIndex rest = m;
        rest.add(w1, -1);
        LoopGenerator W = LoopGenerator::xminus(w1.root, w1.degree);
        Rational sgn = (alg_->parity(g) & alg_->parity(W)) ? -1 : 1;
        for (auto& [b, c] : apply(g, rest, l).terms())
            for (auto& [mm, cm] : mult_letter(w1, b.first).terms()) out.add({mm, b.second}, sgn * c * cm);
        for (auto& [h, ch] : alg_->bracket(g, W).terms()) out.add(apply(h, rest, l), ch);
        return out;
    }

    InducedVector act(const LoopGenerator& g, const InducedVector& v) const {
        InducedVector out;
        for (auto& [b, c] : v.terms()) out.add(apply(g, b.first, b.second), c);
        return out;
    }
    InducedVector act(const LoopElement& x, const InducedVector& v) const {
        InducedVector out;
        for (auto& [g, c] : x.terms()) out.add(act(g, v), c);
        return out;
    }

    /// phi_{i,r} as an element of the loop algebra.
    LoopElement phi_element(int i, int r) const {
        if (r > 0) return LoopElement(LoopGenerator::h(i, r));
        auto tab = V_.table_for(-r);
        LoopElement out;
        for (int j = 1; j <= V_.rank(); ++j) out.add(LoopGenerator::h(j, r), tab->B(-r)[i - 1][j - 1]);
        return out;
    }

    /// Q^+-part beta of lambda - weight(v); all terms must agree.
    RootLattice beta(const InducedVector& v) const {
        if (v.is_zero()) throw AlgebraError("zero vector has no weight");
        RootLattice b = root_data().weight(v.terms().begin()->first.first);
        for (auto& [bb, c] : v.terms())
            if (root_data().weight(bb.first) != b) throw AlgebraError("vector is not a weight vector");
        return b;
    }
    long ht(const InducedVector& v) const { return height(beta(v)); }

    /// One step of the height reduction: x^+_{alpha0, ell} with alpha0 the minimal
    /// position of the minimal monomial.
    HtReduction ht_reduce(const InducedVector& v) const {
        if (ht(v) == 0) throw AlgebraError("ht_reduce needs ht(v) > 0");
        std::map<MonomialIndex, DiagVector<Rational>> parts;
        for (auto& [b, c] : v.terms()) parts[b.first].add(b.second, c);
        const MonomialIndex& m0 = parts.begin()->first;
        const DiagVector<Rational>& v0 = parts.begin()->second;
        Position p0 = m0.min_position();
        std::set<int> used;
        for (auto& [m, w] : parts)
            for (auto& [l, c] : w.terms())
                for (auto& [ik, en] : l.entries()) used.insert(ik.second);
        auto hco = alg_->coroot(p0.root);
        int limit = 2 * (used.empty() ? 0 : *used.rbegin()) + std::abs(p0.degree) + 16;
        for (int mag = 1; mag <= limit; ++mag)
            for (int ell : {mag, -mag}) {
                int r = ell + p0.degree;
                if (r == 0 || used.count(std::abs(r))) continue;
                DiagVector<Rational> hv;
                for (int i = 1; i <= root_data().rank(); ++i)
                    if (hco[i - 1] != 0) hv.add(V_.h_act(i, r, v0), hco[i - 1]);
                if (hv.is_zero()) continue;
                LoopGenerator g = LoopGenerator::xplus(p0.root, ell);
                InducedVector out = act(g, v);
                if (out.is_zero()) continue;
                if (ht(out) >= ht(v)) throw AlgebraError("height did not decrease");
                return {g, out, ell};
            }
        throw AlgebraError("ht_reduce: no admissible ell up to " + std::to_string(limit));
    }

    InducedVector apply_step(const CertStep& s, const InducedVector& v) const {
        switch (s.kind) {
            case CertStep::Raise:
                return act(s.g, v);
            case CertStep::Phi:
                return act(phi_element(s.i, s.r), v);
            default: {
                InducedVector w = act(phi_element(s.i, s.r), act(phi_element(s.i, -s.r), v));
                w.add(v, -s.e);
                return w;
            }
        }
    }

    InducedVector replay(const CyclicityCertificate& cert, InducedVector v) const {
        for (const auto& s : cert.steps) v = apply_step(s, v);
        return v;
    }

    /// Raises v into 1 (x) V by repeated ht_reduce, then returns to v_{mu,a}
    /// inside V. A failure of the return yields a proper-submodule witness.
    CyclicityCertificate cyclicity_certificate(InducedVector v, int fuel) const {
        CyclicityCertificate cert;
        if (v.is_zero()) throw AlgebraError("cyclicity certificate needs a nonzero vector");
        if (lambda_.c == 0) throw AlgebraError("cyclicity certificate needs lambda(c) != 0");
        while (ht(v) > 0) {
            if (fuel-- <= 0) {
                cert.reason = "fuel exhausted";
                return cert;
            }
            auto red = ht_reduce(v);
            cert.steps.push_back({CertStep::Raise, red.g, 0, 0, 0});
            v = std::move(red.result);
        }
        DiagVector<Rational> w;
        for (auto& [b, c] : v.terms()) w.add(b.second, c);
        auto back = cyclic_return(V_, w);
        if (!back.success) {
            cert.status = CyclicityCertificate::Submodule;
            cert.witness = v;
            cert.reason = "every return path to v_{mu,a} meets a zero eigenvalue";
            return cert;
        }
        for (auto& s : back.steps)
            cert.steps.push_back(
                {s.kind == DiagStep<Rational>::Phi ? CertStep::Phi : CertStep::Project, LoopGenerator{}, s.i, s.r, s.e});
        cert.scalar = back.scalar;
        cert.status = CyclicityCertificate::Certified;
        return cert;
    }

    /// Number of monomials of weight beta and total degree n whose letters have
    /// degrees in [-D, D], split by root parity filter (0 even only, 1 odd only, -1 all).
    std::map<std::pair<RootLattice, long>, std::size_t> monomial_counts(long B, int D, int parity_filter) const {
        std::vector<Position> letters;
        for (const Root& r : root_data().positive_roots()) {
            if (parity_filter >= 0 && root_data().parity(r) != parity_filter) continue;
            if (r.height() > B) continue;
            for (int k = -D; k <= D; ++k) letters.push_back({r, k});
        }
        std::map<std::pair<RootLattice, long>, std::size_t> out;
        RootLattice beta(static_cast<std::size_t>(root_data().rank()), 0);
        std::function<void(std::size_t, long, long)> rec = [&](std::size_t pos, long h, long n) {
            if (pos == letters.size()) {
                ++out[{beta, n}];
                return;
            }
            rec(pos + 1, h, n);
            const Position& p = letters[pos];
            int maxe = root_data().parity(p.root) ? 1 : static_cast<int>(B);
            auto c = root_data().coordinates(p.root);
            int done = 0;
            for (int e = 1; e <= maxe && h + e * p.root.height() <= B; ++e, ++done) {
                for (int i = 0; i < root_data().rank(); ++i) beta[i] += c[i];
                rec(pos + 1, h + e * p.root.height(), n + static_cast<long>(e) * p.degree);
            }
            for (int i = 0; i < root_data().rank(); ++i) beta[i] -= done * c[i];
        };
        rec(0, 0, 0);
        return out;
    }

    /// Label counts of M(lambda,V) against the Kac factorization U(g_{-1} loop) x M_0(lambda,V).
    KacReport kac_graded_compare(long B, int D) const {
        if (!root_data().parity().is_distinguished())
            throw AlgebraError("Kac comparison needs the distinguished parity sequence");
        if (!V_.finite_graded()) throw AlgebraError("Kac comparison needs finite graded pieces of V");
        auto all = monomial_counts(B, D, -1);
        auto odd = monomial_counts(B, D, 1);
        auto even = monomial_counts(B, D, 0);
        long vmin = -static_cast<long>(B) * D - D, vmax = static_cast<long>(B) * D + D;
        std::map<long, std::size_t> vdim;
        for (long n = vmin; n <= vmax; ++n) vdim[n] = graded_dim(V_, n, 0).count;
        KacReport rep;
        std::map<std::pair<RootLattice, long>, std::size_t> direct, product;
        for (auto& [key, cnt] : all)
            for (auto& [n, dv] : vdim) direct[{key.first, key.second + n}] += cnt * dv;
        for (auto& [ko, co] : odd)
            for (auto& [ke, ce] : even) {
                RootLattice b = ko.first;
                for (std::size_t i = 0; i < b.size(); ++i) b[i] += ke.first[i];
                if (height(b) > B) continue;
                for (auto& [n, dv] : vdim) product[{b, ko.second + ke.second + n}] += co * ce * dv;
            }
        for (auto& [key, cnt] : direct) {
            if (std::abs(key.second) > D) continue;
            rep.rows.push_back({key.first, key.second, cnt, product[key]});
        }
        for (auto& [key, cnt] : product)
            if (std::abs(key.second) <= D && !direct.count(key)) rep.rows.push_back({key.first, key.second, 0, cnt});
        return rep;
    }

private:
    MonomialComb compute_mult(const Position& y, const MonomialIndex& m) const {
        const auto& rd = root_data();
        MonomialComb out;
        if (m.empty() || m.entries().rbegin()->first < y) {
            MonomialIndex r = m;
            r.add(y, 1);
            out.add(r, 1);
            return out;
        }
        Position w1 = m.entries().rbegin()->first;
        if (w1 == y) {
            if (rd.parity(y.root) == 1) return out;  // odd isotropic letters square to zero
            MonomialIndex r = m;
            r.add(y, 1);
            out.add(r, 1);
            return out;
        }
        MonomialIndex rest = m;
        rest.add(w1, -1);
        LoopGenerator Y = LoopGenerator::xminus(y.root, y.degree), W = LoopGenerator::xminus(w1.root, w1.degree);
        Rational sgn = (alg_->parity(Y) & alg_->parity(W)) ? -1 : 1;
        out.add(mult_letter(w1, mult_letter(y, rest)), sgn);
        for (auto& [z, cz] : alg_->bracket(Y, W).terms()) {
            if (z.kind != LoopGenerator::XMinus) throw AlgebraError("bracket of x^- letters left n^-");
            out.add(mult_letter(z.position(), rest), cz);
        }
        return out;
    }

    struct Cache {
        std::mutex m;
        std::map<std::pair<Position, MonomialIndex>, MonomialComb> mult;
    };

    std::shared_ptr<AffineAlgebra> alg_;
    Weight lambda_;
    DiagModule<Rational> V_;
    std::shared_ptr<Cache> cache_;
};

}  // namespace imverma
