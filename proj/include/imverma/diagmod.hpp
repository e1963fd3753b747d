#pragma once

// Diagonal modules V(mu, a, F) over the Heisenberg algebra (classical F =
// Rational, quantum F = Scalar). Basis vectors are products of powers of
// phi_{i,k} or phi_{i,-k} applied to the cyclic vector v_{mu,a}.

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "imverma/heis.hpp"

namespace imverma {

using IndexPair = std::pair<int, int>;  // (i, k), k > 0

/// Finitely supported map (i,k) -> (sign, power > 0).
class DiagLabel {
public:
    struct Entry {
        int sign = 1;
        int power = 0;
        friend auto operator<=>(const Entry&, const Entry&) = default;
    };

    Entry get(int i, int k) const {
        auto it = e_.find({i, k});
        return it == e_.end() ? Entry{1, 0} : it->second;
    }
    void set(int i, int k, int sign, int power) {
        if (power < 0) throw AlgebraError("negative power in diagonal label");
        if (power == 0)
            e_.erase({i, k});
        else
            e_[{i, k}] = Entry{sign, power};
    }
    bool empty() const noexcept { return e_.empty(); }
    const std::map<IndexPair, Entry>& entries() const noexcept { return e_; }

    /// q^d-degree: sum of sign * power * k.
    long degree() const {
        long d = 0;
        for (auto& [ik, en] : e_) d += static_cast<long>(en.sign) * en.power * ik.second;
        return d;
    }
    long abs_degree() const {
        long d = 0;
        for (auto& [ik, en] : e_) d += static_cast<long>(en.power) * ik.second;
        return d;
    }
    std::string str() const {
        if (e_.empty()) return "v";
        std::string out;
        for (auto& [ik, en] : e_) {
            out += "phi(" + std::to_string(ik.first) + "," + std::to_string(en.sign * ik.second) + ")";
            if (en.power > 1) out += "^" + std::to_string(en.power);
            out += " ";
        }
        return out + "v";
    }
    friend auto operator<=>(const DiagLabel&, const DiagLabel&) = default;

private:
    std::map<IndexPair, Entry> e_;
};

/// Finitely supported linear combination of keys with coefficients in F.
template <class Key, class F>
class LinComb {
public:
    LinComb() = default;
    LinComb(const Key& k, F c = F(1)) { add(k, c); }  // NOLINT(google-explicit-constructor)

    void add(const Key& k, const F& c) {
        if (Field<F>::is_zero(c)) return;
        auto it = t_.find(k);
        if (it == t_.end()) {
            t_.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (Field<F>::is_zero(it->second)) t_.erase(it);
        }
    }
    void add(const LinComb& o, const F& c = F(1)) {
        for (auto& [k, v] : o.t_) add(k, v * c);
    }
    F coeff(const Key& k) const {
        auto it = t_.find(k);
        return it == t_.end() ? F(0) : it->second;
    }
    bool is_zero() const noexcept { return t_.empty(); }
    std::size_t size() const noexcept { return t_.size(); }
    const std::map<Key, F>& terms() const& noexcept { return t_; }
    std::map<Key, F> terms() && noexcept { return std::move(t_); }

    friend LinComb operator+(LinComb a, const LinComb& b) {
        a.add(b);
        return a;
    }
    friend LinComb operator-(LinComb a, const LinComb& b) {
        a.add(b, F(-1));
        return a;
    }
    friend LinComb operator*(const F& c, const LinComb& a) {
        LinComb out;
        if (Field<F>::is_zero(c)) return out;
        for (auto& [k, v] : a.t_) out.t_.emplace(k, v * c);
        return out;
    }
    friend bool operator==(const LinComb&, const LinComb&) = default;

private:
    std::map<Key, F> t_;
};

template <class F>
using DiagVector = LinComb<DiagLabel, F>;

/// mu_{i,k} as finitely many explicit entries plus a default rule.
template <class F>
struct EigenvalueTable {
    enum class Default {
        Constant,      // mu_{i,k} = value
        Generic,       // never in [ka]Z, never zero
        LevelMultiple  // mu_{i,k} = t [ka]
    };

    long a = 1;
    std::map<IndexPair, F> entries;
    Default rule = Default::Generic;
    F value = F(0);
    long multiple = 0;

    static F bracket(long n) { return Field<F>::bracket_number(n); }

    /// The generic rule is realized by the half-integers (2(i+k)+1)/2: never an
    /// integer multiple of [ka] or ka, never zero, and without pole at q = 1.
    F operator()(int i, int k) const {
        auto it = entries.find({i, k});
        if (it != entries.end()) return it->second;
        switch (rule) {
            case Default::Constant:
                return value;
            case Default::LevelMultiple:
                return F(Rational(multiple)) * bracket(k * a);
            default:
                return F(Rational(2 * (i + k) + 1, 2));
        }
    }

    void set(int i, int k, F v) { entries[{i, k}] = std::move(v); }

    /// t = mu_{i,k}/[ka] when it is an integer.
    std::optional<long> ratio(int i, int k) const {
        F t = (*this)(i, k) / bracket(k * a);
        long n;
        if (Field<F>::as_integer(t, n)) return n;
        return std::nullopt;
    }

    /// Same default rule (the tables then differ in finitely many places).
    bool same_default(const EigenvalueTable& o) const {
        if (rule != o.rule || a != o.a) return false;
        if (rule == Default::Constant) return value == o.value;
        if (rule == Default::LevelMultiple) return multiple == o.multiple;
        return true;
    }
};

/// Defect set: explicit pairs, or every index.
struct DefectSet {
    bool all = false;
    std::set<IndexPair> pairs;

    bool contains(int i, int k) const { return all || pairs.count({i, k}) != 0; }
    static DefectSet everything() { return DefectSet{true, {}}; }
};

/// Reducibility set F_{mu,a} restricted to k <= K: index -> t = mu/[ka].
template <class F>
std::map<IndexPair, long> reducibility_set(const EigenvalueTable<F>& mu, int rank, int K) {
    std::map<IndexPair, long> out;
    for (int i = 1; i <= rank; ++i)
        for (int k = 1; k <= K; ++k)
            if (auto t = mu.ratio(i, k)) out.emplace(IndexPair{i, k}, *t);
    return out;
}

template <class F>
class DiagModule {
public:
    using Vector = DiagVector<F>;

    DiagModule(std::vector<std::vector<long>> A, EigenvalueTable<F> mu, DefectSet defect = {})
        : A_(std::move(A)), mu_(std::move(mu)), defect_(std::move(defect)), cache_(std::make_shared<PhiCache>()) {
        if (mu_.a == 0) throw AlgebraError("level a must be nonzero");
        if (defect_.all) {
            if (!(mu_.rule == EigenvalueTable<F>::Default::LevelMultiple ||
                  (mu_.rule == EigenvalueTable<F>::Default::Constant && Field<F>::is_zero(mu_.value))))
                throw AlgebraError("defect set 'all' requires every mu_{i,k} in [ka]Z");
            for (auto& [ik, v] : mu_.entries)
                if (!mu_.ratio(ik.first, ik.second))
                    throw AlgebraError("defect index outside the reducibility set");
        }
        for (auto& ik : defect_.pairs)
            if (ik.first < 1 || ik.first > rank() || ik.second < 1 || !mu_.ratio(ik.first, ik.second))
                throw AlgebraError("defect index (" + std::to_string(ik.first) + "," + std::to_string(ik.second) +
                                   ") is not in the reducibility set");
    }
    DiagModule(const RootData& rd, EigenvalueTable<F> mu, DefectSet defect = {})
        : DiagModule(rd.heis_cartan(), std::move(mu), std::move(defect)) {}

    int rank() const noexcept { return static_cast<int>(A_.size()); }
    long level() const noexcept { return mu_.a; }
    const EigenvalueTable<F>& table() const noexcept { return mu_; }
    const DefectSet& defect() const noexcept { return defect_; }
    const std::vector<std::vector<long>>& cartan() const noexcept { return A_; }
    F mu(int i, int k) const { return mu_(i, k); }
    F bracket_ka(int k) const { return Field<F>::bracket_number(k * mu_.a); }

    /// Largest allowed power in direction sign at (i,k); -1 when unbounded.
    long bound(int i, int k, int sign) const {
        if (!defect_.contains(i, k)) return -1;
        long t = *mu_.ratio(i, k);
        if (t > 0) return sign > 0 ? t - 1 : -1;
        return sign < 0 ? -t : -1;
    }
    bool legal(const DiagLabel& l) const {
        for (auto& [ik, en] : l.entries()) {
            if (ik.first < 1 || ik.first > rank() || ik.second < 1) return false;
            long b = bound(ik.first, ik.second, en.sign);
            if (b >= 0 && en.power > b) return false;
        }
        return true;
    }

    /// Eigenvalue of phi_{i,k} phi_{i,-k} on a basis label: mu - sign*p*[ka].
    F eigenvalue(const DiagLabel& l, int i, int k) const {
        auto en = l.get(i, k);
        return mu(i, k) - F(Rational(en.sign * en.power)) * bracket_ka(k);
    }

    /// phi_{i,r} on a basis label.
    Vector phi_act(int i, int r, const DiagLabel& l) const {
        if (r == 0) throw AlgebraError("phi_{i,0} is not defined");
        int k = r > 0 ? r : -r, eps = r > 0 ? 1 : -1;
        auto en = l.get(i, k);
        DiagLabel out = l;
        if (en.power == 0 || en.sign == eps) {
            long b = bound(i, k, eps);
            if (b >= 0 && en.power + 1 > b) return {};
            out.set(i, k, eps, en.power + 1);
            return Vector(out);
        }
        F coeff = en.sign > 0 ? F(mu(i, k) - F(Rational(en.power)) * bracket_ka(k))
                              : F(mu(i, k) + F(Rational(en.power - 1)) * bracket_ka(k));
        out.set(i, k, en.sign, en.power - 1);
        return Vector(out, coeff);
    }
    Vector phi_act(int i, int r, const Vector& v) const {
        Vector out;
        for (auto& [l, c] : v.terms()) out.add(phi_act(i, r, l), c);
        return out;
    }

    /// H_{i,r}: equal to phi_{i,r} for r > 0, and sum_j ([rA_ij]/r) phi_{j,r} for r < 0.
    Vector h_act(int i, int r, const Vector& v) const {
        if (r > 0) return phi_act(i, r, v);
        auto tab = table_for(-r);
        const auto& back = tab->B_inverse(-r);
        Vector out;
        for (int j = 1; j <= rank(); ++j) {
            const F& c = back[i - 1][j - 1];
            if (!Field<F>::is_zero(c)) out.add(phi_act(j, r, v), c);
        }
        return out;
    }
    Vector h_act(int i, int r, const DiagLabel& l) const { return h_act(i, r, Vector(l)); }

    std::shared_ptr<const PhiTable<F>> table_for(int r) const {
        std::lock_guard<std::mutex> lock(cache_->m);
        if (!cache_->t || cache_->t->rmax() < r)
            cache_->t = std::make_shared<PhiTable<F>>(A_, std::max(r, cache_->t ? 2 * cache_->t->rmax() : 8));
        return cache_->t;
    }

    /// True iff F_{mu,a}(k <= K) is contained in the defect set.
    bool is_irreducible(int K) const {
        for (auto& [ik, t] : reducibility_set(mu_, rank(), K))
            if (!defect_.contains(ik.first, ik.second)) return false;
        return true;
    }

    /// Constant-phi Verma modules are the only ones with finite graded pieces.
    bool finite_graded() const {
        if (!defect_.all || mu_.rule != EigenvalueTable<F>::Default::LevelMultiple) return false;
        if (mu_.multiple != 0 && mu_.multiple != 1) return false;
        for (auto& [ik, v] : mu_.entries)
            if (mu_.ratio(ik.first, ik.second) != mu_.multiple) return false;
        return true;
    }

    /// All legal labels with k <= kmax and sum of power*k <= budget.
    std::vector<DiagLabel> enumerate(int kmax, int budget) const {
        std::vector<DiagLabel> out;
        std::vector<IndexPair> idx;
        for (int k = 1; k <= kmax; ++k)
            for (int i = 1; i <= rank(); ++i) idx.push_back({i, k});
        DiagLabel cur;
        std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
            if (pos == idx.size()) {
                out.push_back(cur);
                return;
            }
            auto [i, k] = idx[pos];
            rec(pos + 1, left);
            for (int sign : {1, -1})
                for (int p = 1; p * k <= left; ++p) {
                    long b = bound(i, k, sign);
                    if (b >= 0 && p > b) break;
                    cur.set(i, k, sign, p);
                    rec(pos + 1, left - p * k);
                }
            cur.set(i, k, 1, 0);
        };
        rec(0, budget);
        return out;
    }

private:
    struct PhiCache {
        std::mutex m;
        std::shared_ptr<PhiTable<F>> t;
    };

    std::vector<std::vector<long>> A_;
    EigenvalueTable<F> mu_;
    DefectSet defect_;
    std::shared_ptr<PhiCache> cache_;
};

struct GradedDim {
    std::size_t count = 0;
    bool finite = false;
};

/// Number of basis labels of degree n. Exact when the module is a constant-phi
/// Verma module; otherwise limited to labels with k, sum p*k <= bound.
template <class F>
GradedDim graded_dim(const DiagModule<F>& m, long n, int bound) {
    GradedDim g;
    g.finite = m.finite_graded();
    int b = g.finite ? static_cast<int>(n < 0 ? -n : n) : bound;
    for (const auto& l : m.enumerate(b, b))
        if (l.degree() == n) ++g.count;
    return g;
}

/// phi-Verma module: phi_{i, s(i,k) k} v = 0 where s is +1/-1 with finitely many exceptions.
template <class F>
DiagModule<F> phi_verma(const std::vector<std::vector<long>>& A, int default_sign, const std::map<IndexPair, int>& exceptions,
                        long a) {
    EigenvalueTable<F> mu;
    mu.a = a;
    mu.rule = EigenvalueTable<F>::Default::LevelMultiple;
    mu.multiple = default_sign > 0 ? 1 : 0;
    for (auto& [ik, s] : exceptions)
        mu.set(ik.first, ik.second, s > 0 ? Field<F>::bracket_number(ik.second * a) : F(0));
    return DiagModule<F>(A, mu, DefectSet::everything());
}

/// Result of the brute-force invariant-subspace search on a truncated span.
template <class F>
struct SubmoduleSearch {
    bool found = false;        // a proper invariant subspace exists
    std::size_t dimension = 0;  // dimension of the truncated span
    DiagLabel generator;       // label whose closure is proper
    std::size_t closure_dim = 0;
};

/// Searches labels with k <= kmax and sum p*k <= budget for a proper subspace
/// closed under the projected operators phi_{i,+-k}, k <= kmax.
template <class F>
SubmoduleSearch<F> truncated_submodule_search(const DiagModule<F>& m, int kmax, int budget) {
    auto labels = m.enumerate(kmax, budget);
    std::map<DiagLabel, int> index;
    for (std::size_t t = 0; t < labels.size(); ++t) index.emplace(labels[t], static_cast<int>(t));
    auto to_sparse = [&](const DiagVector<F>& v) {
        SparseVec<F> s;
        for (auto& [l, c] : v.terms()) {
            auto it = index.find(l);
            if (it != index.end()) s.emplace(it->second, c);
        }
        return s;
    };
    SubmoduleSearch<F> res;
    res.dimension = labels.size();
    for (const auto& start : labels) {
        Echelon<F> span;
        std::vector<DiagVector<F>> queue{DiagVector<F>(start)};
        span.insert(to_sparse(queue[0]));
        for (std::size_t head = 0; head < queue.size() && span.rank() < labels.size(); ++head) {
            for (int i = 1; i <= m.rank(); ++i)
                for (int k = 1; k <= kmax; ++k)
                    for (int r : {k, -k}) {
                        DiagVector<F> w, full = m.phi_act(i, r, queue[head]);
                        for (auto& [l, c] : full.terms())
                            if (index.count(l)) w.add(l, c);
                        if (w.is_zero()) continue;
                        if (span.insert(to_sparse(w))) queue.push_back(w);
                    }
        }
        if (span.rank() < labels.size()) {
            res.found = true;
            res.generator = start;
            res.closure_dim = span.rank();
            return res;
        }
    }
    return res;
}

/// Isomorphism test between V(mu, a, F) and V(nu, a, F); the witness lists the
/// shifts xi_{i,+-k} (as signed index pairs with multiplicity) with
/// v_mu -> prod phi_{i,+-k}^n v_nu.
struct IsoResult {
    bool iso = false;
    std::string reason;
    std::vector<std::pair<IndexPair, long>> witness;  // ((i,k), n): n > 0 uses phi_{i,k}, n < 0 uses phi_{i,-k}
};

template <class F>
IsoResult iso_test(const EigenvalueTable<F>& mu, const EigenvalueTable<F>& nu, const DefectSet& defect, int rank, int K) {
    IsoResult res;
    if (mu.a != nu.a) {
        res.reason = "levels differ";
        return res;
    }
    if (!mu.same_default(nu)) {
        res.reason = "tables differ in infinitely many places";
        return res;
    }
    {
        auto fm = reducibility_set(mu, rank, K), fn = reducibility_set(nu, rank, K);
        bool same_keys = fm.size() == fn.size();
        for (auto& [ik, t] : fm) same_keys = same_keys && fn.count(ik);
        if (!same_keys) {
            res.reason = "defect-set mismatch: reducibility sets differ";
            return res;
        }
    }
    std::set<IndexPair> keys;
    for (auto& [ik, v] : mu.entries) keys.insert(ik);
    for (auto& [ik, v] : nu.entries) keys.insert(ik);
    for (const auto& ik : keys) {
        auto [i, k] = ik;
        F diff = nu(i, k) - mu(i, k);
        if (Field<F>::is_zero(diff)) continue;
        long n;
        if (!Field<F>::as_integer(diff / Field<F>::bracket_number(k * mu.a), n)) {
            res.reason = "mu - nu not in [ka]Z at (" + std::to_string(i) + "," + std::to_string(k) + ")";
            return res;
        }
        if (defect.contains(i, k)) {
            auto tm = mu.ratio(i, k), tn = nu.ratio(i, k);
            if (!tm || !tn || ((*tm > 0) != (*tn > 0))) {
                res.reason = "forced signs differ at (" + std::to_string(i) + "," + std::to_string(k) + ")";
                return res;
            }
        } else {
            // the shift must not pass through a zero eigenvalue
            F nk = nu(i, k), b = Field<F>::bracket_number(k * mu.a);
            for (long p = 1; p <= (n > 0 ? n : -n); ++p) {
                F e = n > 0 ? F(nk - F(Rational(p)) * b) : F(nk + F(Rational(p - 1)) * b);
                if (Field<F>::is_zero(e)) {
                    res.reason = "shift at (" + std::to_string(i) + "," + std::to_string(k) +
                                 ") passes through a zero eigenvalue";
                    return res;
                }
            }
        }
        res.witness.push_back({ik, n});
    }
    res.iso = true;
    return res;
}

/// Image of v_mu under the witness, as a basis label of V(nu).
inline DiagLabel apply_witness(const IsoResult& r) {
    DiagLabel l;
    for (auto& [ik, n] : r.witness) l.set(ik.first, ik.second, n > 0 ? 1 : -1, static_cast<int>(n > 0 ? n : -n));
    return l;
}

/// One step of a return path inside V: apply phi_{i,r}, or apply
/// (phi_{i,k} phi_{i,-k} - e) to isolate an eigencomponent.
template <class F>
struct DiagStep {
    enum Kind { Phi, Project };
    Kind kind = Phi;
    int i = 0;
    int r = 0;  // phi degree, or k for Project
    F e = F(0);

    std::string str() const {
        if (kind == Phi) return "phi(" + std::to_string(i) + "," + std::to_string(r) + ")";
        return "project(" + std::to_string(i) + "," + std::to_string(r) + "," + Field<F>::str(e) + ")";
    }
};

template <class F>
DiagVector<F> apply_step(const DiagModule<F>& m, const DiagStep<F>& s, const DiagVector<F>& v) {
    if (s.kind == DiagStep<F>::Phi) return m.phi_act(s.i, s.r, v);
    auto w = m.phi_act(s.i, s.r, m.phi_act(s.i, -s.r, v));
    w.add(v, -s.e);
    return w;
}

template <class F>
struct CyclicReturn {
    bool success = false;
    std::vector<DiagStep<F>> steps;
    F scalar = F(0);  // result = scalar * v_{mu,a}
};

/// Maps a nonzero vector of V to a nonzero multiple of v_{mu,a}: isolate one
/// label with eigen-projectors, then lower it with phi's. Fails iff every label
/// of the support runs into a zero lowering coefficient.
template <class F>
CyclicReturn<F> cyclic_return(const DiagModule<F>& m, const DiagVector<F>& v) {
    CyclicReturn<F> res;
    if (v.is_zero()) return res;
    for (auto& [target, c0] : v.terms()) {
        std::vector<DiagStep<F>> steps;
        DiagVector<F> w = v;
        // isolate target
        std::set<IndexPair> idx;
        for (auto& [l, c] : v.terms())
            for (auto& [ik, en] : l.entries()) idx.insert(ik);
        for (const auto& [i, k] : idx) {
            F et = m.eigenvalue(target, i, k);
            std::vector<F> others;
            for (auto& [l, c] : w.terms()) {
                F e = m.eigenvalue(l, i, k);
                if (!(e == et) && std::find(others.begin(), others.end(), e) == others.end()) others.push_back(e);
            }
            for (const F& e : others) {
                DiagStep<F> s{DiagStep<F>::Project, i, k, e};
                w = apply_step(m, s, w);
                steps.push_back(s);
            }
        }
        if (w.size() != 1 || !(w.terms().begin()->first == target)) continue;
        // lower to the cyclic vector
        bool stuck = false;
        for (auto& [ik, en] : target.entries()) {
            for (int p = 0; p < en.power; ++p) {
                DiagStep<F> s{DiagStep<F>::Phi, ik.first, -en.sign * ik.second, F(0)};
                w = apply_step(m, s, w);
                steps.push_back(s);
                if (w.is_zero()) {
                    stuck = true;
                    break;
                }
            }
            if (stuck) break;
        }
        if (stuck) continue;
        res.success = true;
        res.steps = std::move(steps);
        res.scalar = w.coeff(DiagLabel{});
        return res;
    }
    return res;
}

}  // namespace imverma
