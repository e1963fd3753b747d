#pragma once

// Quantum generalized imaginary Verma modules M_q(lambda, V_q). Vectors are
// stored in PBWD coordinates; generators act on the word form (products of
// simple X^- letters applied to V_q) and the result is brought back to PBWD
// coordinates by the windowed normal form.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "imverma/affmod.hpp"
#include "imverma/qalg.hpp"

namespace imverma {

using QBasis = std::pair<MonomialIndex, DiagLabel>;
using QVector = LinComb<QBasis, Scalar>;
using WBasis = std::pair<Word, DiagLabel>;
using WVector = LinComb<WBasis, Scalar>;

/// Product g_1 g_2 ... g_p (applied right to left) with coefficients.
using QWordElement = LinComb<std::vector<QGenerator>, Scalar>;

inline std::string qvector_str(const QVector& v) {
    if (v.is_zero()) return "0";
    std::string out;
    for (auto& [b, c] : v.terms()) {
        if (!out.empty()) out += " + ";
        out += "(" + c.str() + ") " + b.first.str() + " (x) " + b.second.str();
    }
    return out;
}

inline std::string qword_str(const std::vector<QGenerator>& w) {
    std::string out;
    for (const auto& g : w) out += (out.empty() ? "" : " ") + g.str();
    return out.empty() ? "1" : out;
}

/// True iff no stored eigenvalue (nor the default) has a pole at q = 1.
inline bool limit_faithful(const EigenvalueTable<Scalar>& mu) {
    for (auto& [ik, v] : mu.entries)
        if (!v.in_A()) return false;
    if (mu.rule == EigenvalueTable<Scalar>::Default::Constant && !mu.value.in_A()) return false;
    return true;
}

/// The q = 1 specialization of a limit-faithful table.
inline EigenvalueTable<Rational> limit_table(const EigenvalueTable<Scalar>& mu) {
    EigenvalueTable<Rational> out;
    out.a = mu.a;
    out.multiple = mu.multiple;
    switch (mu.rule) {
        case EigenvalueTable<Scalar>::Default::Constant:
            out.rule = EigenvalueTable<Rational>::Default::Constant;
            break;
        case EigenvalueTable<Scalar>::Default::Generic:
            out.rule = EigenvalueTable<Rational>::Default::Generic;
            break;
        default:
            out.rule = EigenvalueTable<Rational>::Default::LevelMultiple;
    }
    for (auto& [ik, v] : mu.entries) {
        if (!v.in_A())
            throw AlgebraError("mu(" + std::to_string(ik.first) + "," + std::to_string(ik.second) + ") = " + v.str() +
                               " has a pole at q = 1");
        out.entries.emplace(ik, v.at_one());
    }
    if (!mu.value.in_A()) throw AlgebraError("default eigenvalue " + mu.value.str() + " has a pole at q = 1");
    out.value = mu.value.at_one();
    return out;
}

struct AFormEntry {
    QBasis basis;
    Scalar coeff;
    bool in_A = true;
    std::optional<Rational> at_one;
};

struct AFormMembership {
    bool in_A = true;
    std::vector<AFormEntry> entries;
};

inline AFormMembership a_form_membership(const QVector& v) {
    AFormMembership out;
    for (auto& [b, c] : v.terms()) {
        AFormEntry e{b, c, c.in_A(), std::nullopt};
        if (e.in_A) e.at_one = c.at_one();
        out.in_A = out.in_A && e.in_A;
        out.entries.push_back(std::move(e));
    }
    return out;
}

struct QCertStep {
    enum Kind { Rescale, Raise, Phi, Project };
    Kind kind = Raise;
    Root alpha{};
    int ell = 0;
    int i = 0;
    int r = 0;
    Scalar e = 0;  // rescaling factor or projection eigenvalue

    std::string str() const {
        switch (kind) {
            case Rescale:
                return "rescale(" + e.str() + ")";
            case Raise:
                return "X+(" + alpha.str() + "," + std::to_string(ell) + ")";
            case Phi:
                return "phi(" + std::to_string(i) + "," + std::to_string(r) + ")";
            default:
                return "project(" + std::to_string(i) + "," + std::to_string(r) + "," + e.str() + ")";
        }
    }
};

struct QCyclicityCertificate {
    CyclicityCertificate::Status status = CyclicityCertificate::Inconclusive;
    std::vector<QCertStep> steps;
    Scalar scalar = 0;  // replay result = scalar * (1 (x) v_{mu,a})
    QVector witness;
    std::string reason;
};

/// Outcome of one relation family on a batch of vectors.
struct RelationCheck {
    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string first_failure;
};

struct RelationReport {
    std::vector<RelationCheck> families;
    bool pass() const {
        return std::all_of(families.begin(), families.end(), [](const RelationCheck& f) { return f.failures == 0; });
    }
};

struct LimitCheck {
    std::string kind;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string first_failure;
};

struct LimitReport {
    std::vector<LimitCheck> kinds;
    bool pass() const {
        return std::all_of(kinds.begin(), kinds.end(), [](const LimitCheck& k) { return k.failures == 0; });
    }
};

class QModule {
public:
    QModule(RootData rd, Weight lambda, DiagModule<Scalar> V, int window = 2, PBWDConfig cfg = {})
        : rd_(std::make_shared<RootData>(rd)),
          lambda_(std::move(lambda)),
          V_(std::move(V)),
          window_(window),
          engine_(std::make_shared<NormalFormEngine>(std::move(rd), std::move(cfg))) {
        if (rd_->is_reduced()) throw AlgebraError("quantum induced modules require m != n");
        if (static_cast<int>(lambda_.h.size()) != rd_->rank())
            throw AlgebraError("weight must give a value on every h_i");
        if (!lambda_.is_integral() || lambda_.d.get_den() != 1)
            throw AlgebraError("lambda must lie in P_Z (integral values on h_i, c and d)");
        if (lambda_.c != Rational(V_.level())) throw AlgebraError("lambda(c) must equal the level of V_q");
        if (V_.rank() != rd_->rank()) throw AlgebraError("V_q must be a module over the full Heisenberg algebra");
    }

    const RootData& root_data() const noexcept { return *rd_; }
    const Weight& weight() const noexcept { return lambda_; }
    const DiagModule<Scalar>& V() const noexcept { return V_; }
    long level() const { return V_.level(); }
    int window() const noexcept { return window_; }
    const NormalFormEngine& engine() const noexcept { return *engine_; }

    long lambda_h(int i) const { return lambda_.h[static_cast<std::size_t>(i - 1)].get_num().get_si(); }

    static QVector from_diag(const DiagVector<Scalar>& w) {
        QVector out;
        for (auto& [l, c] : w.terms()) out.add({MonomialIndex{}, l}, c);
        return out;
    }

    WVector to_words(const QVector& v) const {
        WVector out;
        for (auto& [b, c] : v.terms()) {
            auto ex = engine_->expand(b.first);
            for (auto& [w, cw] : ex.terms()) out.add({w, b.second}, c * cw);
        }
        return out;
    }

    QVector normalize(const WVector& v) const {
        QVector out;
        for (auto& [b, c] : v.terms()) {
            PBWDCoords nf;
            try {
                nf = engine_->normal_form(b.first, window_);
            } catch (const WindowTooSmall& e) {
                throw WindowTooSmall(std::string(e.what()) + " while normalizing a module vector");
            }
            for (auto& [m, cm] : nf.terms()) out.add({m, b.second}, c * cm);
        }
        return out;
    }

    /// Exponent m with K_i (X^-_w (x) v) = q^m (X^-_w (x) v).
    long k_exponent(int i, const Word& w) const {
        long m = lambda_h(i);
        for (const auto& l : w) m -= rd_->A(i, l.i);
        return m;
    }

    long d_exponent(const Word& w, const DiagLabel& l) const {
        return lambda_.d.get_num().get_si() + word_degree(w) + l.degree();
    }

    WVector act_words(const QGenerator& g, const WVector& v) const {
        using G = QGenerator;
        WVector out;
        const long a = level();
        switch (g.kind) {
            case G::XMinus:
                for (auto& [b, c] : v.terms()) {
                    Word w{{g.i, g.k}};
                    w.insert(w.end(), b.first.begin(), b.first.end());
                    out.add({w, b.second}, c);
                }
                return out;
            case G::H:
                for (auto& [b, c] : v.terms()) {
                    const Word& w = b.first;
                    for (std::size_t j = 0; j < w.size(); ++j) {
                        Scalar co = mode_bracket_HX(*rd_, g.i, g.k, -1, w[j].i).at_level(a);
                        if (co.is_zero()) continue;
                        Word w2 = w;
                        w2[j].k += g.k;
                        out.add({w2, b.second}, c * co);
                    }
                    for (auto& [l, cl] : V_.h_act(g.i, g.k, b.second).terms()) out.add({w, l}, c * cl);
                }
                return out;
            case G::K:
                for (auto& [b, c] : v.terms())
                    out.add(b, c * Scalar::q_power(static_cast<int>(g.e * k_exponent(g.i, b.first))));
                return out;
            case G::Kmode: {
                const int sign = g.e, r = std::abs(g.k);
                WVector base = act_words(QGenerator::kgen(g.i, sign), v);
                for (auto& [mono, cm] : kmode_expand(sign, r).terms()) {
                    WVector t = base;
                    for (int s : mono) t = act_words(QGenerator::h(g.i, s), t);
                    out.add(t, cm);
                }
                return out;
            }
            case G::QC:
                for (auto& [b, c] : v.terms()) out.add(b, c * Scalar::q_power(static_cast<int>(g.e * a)));
                return out;
            case G::QD:
                for (auto& [b, c] : v.terms())
                    out.add(b, c * Scalar::q_power(static_cast<int>(g.e * d_exponent(b.first, b.second))));
                return out;
            case G::Div:
                for (auto& [b, c] : v.terms()) {
                    long m = g.target == G::OnK ? k_exponent(g.i, b.first) : g.target == G::OnC ? a : d_exponent(b.first, b.second);
                    Scalar val = 1;
                    for (int r = 1; r <= g.n; ++r) val = val * qnum(static_cast<int>(m + g.k - r + 1)) / qnum(r);
                    out.add(b, c * val);
                }
                return out;
            case G::XPlus:
                for (auto& [b, c] : v.terms()) {
                    const Word& w = b.first;
                    int sgn = 1;
                    for (std::size_t j = 0; j < w.size(); ++j) {
                        QElement br = mode_bracket_XX(g.i, g.k, w[j].i, w[j].k, a);
                        if (!br.is_zero()) {
                            Word suffix(w.begin() + static_cast<long>(j) + 1, w.end());
                            WVector t = act_words(br, WVector({suffix, b.second}));
                            for (auto& [tb, tc] : t.terms()) {
                                Word full(w.begin(), w.begin() + static_cast<long>(j));
                                full.insert(full.end(), tb.first.begin(), tb.first.end());
                                out.add({full, tb.second}, c * tc * Scalar(sgn));
                            }
                        }
                        if (rd_->simple_parity(g.i) * rd_->simple_parity(w[j].i)) sgn = -sgn;
                    }
                }
                return out;
        }
        return out;
    }

    WVector act_words(const QElement& x, const WVector& v) const {
        WVector out;
        for (auto& [g, c] : x.terms()) out.add(act_words(g, v), c);
        return out;
    }

    WVector act_words(const QWordElement& x, const WVector& v) const {
        WVector out;
        for (auto& [word, c] : x.terms()) {
            WVector t = v;
            for (auto it = word.rbegin(); it != word.rend(); ++it) t = act_words(*it, t);
            out.add(t, c);
        }
        return out;
    }

    QVector act(const QGenerator& g, const QVector& v) const { return normalize(act_words(g, to_words(v))); }
    QVector act(const QElement& x, const QVector& v) const { return normalize(act_words(x, to_words(v))); }
    QVector act(const QWordElement& x, const QVector& v) const { return normalize(act_words(x, to_words(v))); }

    /// Plus-side PBWD root vector X_{alpha,ell} as a product of X^+ letters.
    QWordElement plus_root_vector(const Root& alpha, int ell) const {
        QWordElement out;
        for (auto& [w, c] : pbwd_root_vector(*rd_, alpha, ell, engine_->config()).terms()) {
            std::vector<QGenerator> gs;
            for (const auto& l : w) gs.push_back(QGenerator::xplus(l.i, l.k));
            out.add(gs, c);
        }
        return out;
    }

    /// phi_{i,r} as a combination of H modes.
    QElement phi_element(int i, int r) const {
        if (r > 0) return QElement(QGenerator::h(i, r));
        auto tab = V_.table_for(-r);
        QElement out;
        for (int j = 1; j <= V_.rank(); ++j) out.add(QGenerator::h(j, r), tab->B(-r)[i - 1][j - 1]);
        return out;
    }

    RootLattice beta(const QVector& v) const {
        if (v.is_zero()) throw AlgebraError("zero vector has no weight");
        RootLattice b = rd_->weight(v.terms().begin()->first.first);
        for (auto& [bb, c] : v.terms())
            if (rd_->weight(bb.first) != b) throw AlgebraError("vector is not homogeneous in Q^+");
        return b;
    }
    long ht(const QVector& v) const { return height(beta(v)); }

    /// The classical module M(lambda, V) with V the q = 1 specialization of V_q.
    InducedModule classical() const {
        DiagModule<Rational> Vc(rd_->heis_cartan(), limit_table(V_.table()), V_.defect());
        return InducedModule(AffineAlgebra(*rd_), lambda_, std::move(Vc));
    }

    static InducedVector classical_limit(const QVector& v) {
        InducedVector out;
        for (auto& [b, c] : v.terms()) {
            if (!c.in_A())
                throw AlgebraError("coefficient " + c.str() + " of " + b.first.str() + " (x) " + b.second.str() +
                                   " has a pole at q = 1");
            out.add(b, c.at_one());
        }
        return out;
    }

    /// Image of a generator at q = 1, applied to a classical vector.
    static InducedVector classical_apply(const InducedModule& M, const QGenerator& g, const InducedVector& w) {
        using G = QGenerator;
        switch (g.kind) {
            case G::XPlus:
                return M.act(LoopGenerator::xplus(Root{g.i, g.i + 1}, g.k), w);
            case G::XMinus:
                return M.act(LoopGenerator::xminus(Root{g.i, g.i + 1}, g.k), w);
            case G::H:
                return M.act(LoopGenerator::h(g.i, g.k), w);
            case G::Kmode:
                return {};
            case G::Div: {
                LoopGenerator y = g.target == G::OnK ? LoopGenerator::cartan(g.i)
                                  : g.target == G::OnC ? LoopGenerator::c()
                                                       : LoopGenerator::d();
                InducedVector out;
                for (auto& [b, c] : w.terms()) {
                    Rational m = M.apply(y, b.first, b.second).coeff(b);
                    Rational val = 1;
                    for (int r = 1; r <= g.n; ++r) val *= (m + g.k - r + 1) / Rational(r);
                    out.add(b, c * val);
                }
                return out;
            }
            default:
                return w;
        }
    }

    /// Follows the proof of the quantum height lemma: rescale into the A-form,
    /// pick the raising generator from the classical limit, apply its quantum
    /// counterpart; at height 0 return to v_{mu,a} inside V_q.
    QCyclicityCertificate cyclicity_probe(QVector v, int fuel) const {
        QCyclicityCertificate cert;
        if (v.is_zero()) throw AlgebraError("cyclicity probe needs a nonzero vector");
        const InducedModule M = classical();
        while (ht(v) > 0) {
            if (fuel-- <= 0) {
                cert.reason = "fuel exhausted";
                cert.witness = v;
                return cert;
            }
            int ord = std::numeric_limits<int>::max();
            for (auto& [b, c] : v.terms()) ord = std::min(ord, c.order_at_one());
            if (ord != 0) {
                Scalar f = (Scalar::q() - Scalar(1)).pow(-ord);
                v = f * v;
                cert.steps.push_back({QCertStep::Rescale, {}, 0, 0, 0, f});
            }
            const long h0 = ht(v);
            auto red = M.ht_reduce(classical_limit(v));
            QCertStep s{QCertStep::Raise, red.g.root, red.g.deg, 0, 0, 0};
            QVector nv = act(plus_root_vector(s.alpha, s.ell), v);
            if (nv.is_zero() || ht(nv) >= h0) {
                cert.reason = "raising by " + s.str() + " did not lower the height";
                cert.witness = v;
                return cert;
            }
            cert.steps.push_back(s);
            v = std::move(nv);
        }
        DiagVector<Scalar> w;
        for (auto& [b, c] : v.terms()) w.add(b.second, c);
        auto back = cyclic_return(V_, w);
        if (!back.success) {
            cert.status = CyclicityCertificate::Submodule;
            cert.witness = v;
            cert.reason = "every return path to v_{mu,a} meets a zero eigenvalue";
            return cert;
        }
        for (auto& s : back.steps)
            cert.steps.push_back({s.kind == DiagStep<Scalar>::Phi ? QCertStep::Phi : QCertStep::Project, {}, 0, s.i, s.r, s.e});
        cert.scalar = back.scalar;
        cert.status = CyclicityCertificate::Certified;
        return cert;
    }

    QVector apply_step(const QCertStep& s, const QVector& v) const {
        switch (s.kind) {
            case QCertStep::Rescale:
                return s.e * v;
            case QCertStep::Raise:
                return act(plus_root_vector(s.alpha, s.ell), v);
            case QCertStep::Phi:
                return act(phi_element(s.i, s.r), v);
            default: {
                QVector w = act(phi_element(s.i, s.r), act(phi_element(s.i, -s.r), v));
                w.add(v, -s.e);
                return w;
            }
        }
    }

    QVector replay(const QCyclicityCertificate& cert, QVector v) const {
        for (const auto& s : cert.steps) v = apply_step(s, v);
        return v;
    }

private:
    std::shared_ptr<RootData> rd_;
    Weight lambda_;
    DiagModule<Scalar> V_;
    int window_;
    std::shared_ptr<NormalFormEngine> engine_;
};

// ---------------------------------------------------------------------------
// Sampling and verification

/// Random vectors with A-form coefficients.
class QSampler {
public:
    QSampler(const QModule& M, unsigned seed) : M_(M), rng_(seed) {}

    int uni(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::mt19937& rng() noexcept { return rng_; }

    Scalar coeff() {
        switch (uni(0, 5)) {
            case 0:
                return 1;
            case 1:
                return -1;
            case 2:
                return 2;
            case 3:
                return Scalar::q();
            case 4:
                return Scalar::q_power(-1);
            default:
                return qnum(2);
        }
    }

    DiagLabel label() {
        DiagLabel l;
        const int rank = M_.V().rank();
        for (int t = uni(0, 2); t > 0; --t) l.set(uni(1, rank), uni(1, 2), uni(0, 1) ? 1 : -1, uni(1, 2));
        return M_.V().legal(l) ? l : DiagLabel{};
    }

    /// Random PBWD monomial of weight beta with degrees in [-D, D].
    std::optional<MonomialIndex> monomial(RootLattice beta, int D) {
        const auto& rd = M_.root_data();
        MonomialIndex m;
        for (int guard = 0; guard < 200 && height(beta) > 0; ++guard) {
            std::vector<Root> fit;
            for (const Root& r : rd.positive_roots()) {
                auto co = rd.coordinates(r);
                bool ok = true;
                for (std::size_t a = 0; a < co.size(); ++a) ok = ok && co[a] <= beta[a];
                if (ok) fit.push_back(r);
            }
            Root r = fit[static_cast<std::size_t>(uni(0, static_cast<int>(fit.size()) - 1))];
            Position p{r, uni(-D, D)};
            if (rd.parity(r) == 1 && m(p) > 0) continue;
            m.add(p, 1);
            auto co = rd.coordinates(r);
            for (std::size_t a = 0; a < co.size(); ++a) beta[a] -= co[a];
        }
        if (height(beta) > 0) return std::nullopt;
        return m;
    }

    RootLattice random_beta(int max_height) {
        const int rank = M_.root_data().rank();
        RootLattice b(static_cast<std::size_t>(rank), 0);
        for (int t = uni(0, max_height); t > 0; --t) ++b[static_cast<std::size_t>(uni(0, rank - 1))];
        return b;
    }

    /// Weight vector of weight lambda - beta (+ n delta mixed) with a few terms.
    QVector vector(const RootLattice& beta, int D, int terms = 2) {
        QVector v;
        for (int guard = 0; guard < 50 && static_cast<int>(v.size()) < terms; ++guard) {
            auto m = monomial(beta, D);
            if (m) v.add({*m, label()}, coeff());
        }
        if (v.is_zero()) v.add({MonomialIndex{}, DiagLabel{}}, 1);
        return v;
    }

private:
    const QModule& M_;
    std::mt19937 rng_;
};

namespace detail {

inline QWordElement gen_word(std::initializer_list<QGenerator> gs, Scalar c = 1) {
    return QWordElement(std::vector<QGenerator>(gs), c);
}

/// Relation body over letters of one side, as products of generators.
inline QWordElement as_generators(const WordComb& x, int side) {
    QWordElement out;
    for (auto& [w, c] : x.terms()) {
        std::vector<QGenerator> gs;
        for (const auto& l : w) gs.push_back(side > 0 ? QGenerator::xplus(l.i, l.k) : QGenerator::xminus(l.i, l.k));
        out.add(gs, c);
    }
    return out;
}

}  // namespace detail

/// Applies every defining relation family, with random indices in [-D, D], to
/// `samples` random vectors each; a relation holds when the result is zero.
/// A nonempty `only` restricts the run to the named families.
inline RelationReport verify_relations_on_module(const QModule& M, int samples, unsigned seed,
                                                 const std::vector<std::string>& only = {}) {
    using G = QGenerator;
    using detail::gen_word;
    const RootData& rd = M.root_data();
    const int D = M.window(), rank = rd.rank();
    const long a = M.level();
    QSampler S(M, seed);
    RelationReport rep;
    auto idx = [&] { return S.uni(1, rank); };
    auto deg = [&] { return S.uni(-D, D); };
    auto nz = [&] {
        int r = S.uni(1, D);
        return S.uni(0, 1) ? r : -r;
    };
    auto xgen = [&](int side, int i, int k) { return side > 0 ? G::xplus(i, k) : G::xminus(i, k); };

    struct Family {
        std::string name;
        std::function<std::pair<QWordElement, RootLattice>()> make;  // relation and sample weight
    };
    auto any_beta = [&] { return S.random_beta(2); };
    std::vector<Family> fams;
    fams.push_back({"K-commute", [&] {
                        int i = idx(), j = idx();
                        auto x = gen_word({G::kgen(i), G::kgen(j)}) - gen_word({G::kgen(j), G::kgen(i)});
                        x.add(gen_word({G::kgen(i), G::kgen(i, -1)}));
                        x.add(std::vector<G>{}, -1);
                        return std::pair{x, any_beta()};
                    }});
    for (int side : {1, -1}) {
        std::string s = side > 0 ? "+" : "-";
        fams.push_back({"K-X" + s, [&, side] {
                            int i = idx(), j = idx(), k = deg();
                            auto x = gen_word({G::kgen(i), xgen(side, j, k), G::kgen(i, -1)});
                            x.add(gen_word({xgen(side, j, k)}), -Scalar::q_power(static_cast<int>(side * rd.A(i, j))));
                            return std::pair{x, any_beta()};
                        }});
        fams.push_back({"d-X" + s, [&, side] {
                            int i = idx(), k = deg();
                            auto x = gen_word({G::qd(), xgen(side, i, k), G::qd(-1)});
                            x.add(gen_word({xgen(side, i, k)}), -Scalar::q_power(k));
                            return std::pair{x, any_beta()};
                        }});
        fams.push_back({"H-X" + s, [&, side] {
                            int i = idx(), j = idx(), r = nz(), l = deg();
                            auto x = gen_word({G::h(i, r), xgen(side, j, l)}) - gen_word({xgen(side, j, l), G::h(i, r)});
                            x.add(gen_word({xgen(side, j, l + r)}), -mode_bracket_HX(rd, i, r, side, j).at_level(a));
                            return std::pair{x, any_beta()};
                        }});
    }
    fams.push_back({"d-H", [&] {
                        int i = idx(), r = nz();
                        auto x = gen_word({G::qd(), G::h(i, r), G::qd(-1)});
                        x.add(gen_word({G::h(i, r)}), -Scalar::q_power(r));
                        x.add(gen_word({G::qd(), G::kgen(i)}) - gen_word({G::kgen(i), G::qd()}));
                        return std::pair{x, any_beta()};
                    }});
    fams.push_back({"c-central", [&] {
                        int i = idx(), k = deg();
                        G g = S.uni(0, 2) == 0 ? G::h(i, nz()) : xgen(S.uni(0, 1) ? 1 : -1, i, k);
                        auto x = gen_word({G::qc(), g}) - gen_word({g, G::qc()});
                        return std::pair{x, any_beta()};
                    }});
    fams.push_back({"H-H", [&] {
                        int i = idx(), j = idx(), r = nz(), s = S.uni(0, 1) ? -r : nz();
                        auto x = gen_word({G::h(i, r), G::h(j, s)}) - gen_word({G::h(j, s), G::h(i, r)});
                        if (r + s == 0)
                            x.add(std::vector<G>{}, -qnum(static_cast<int>(r * rd.A(i, j))) / Scalar(r) *
                                                        qnum(static_cast<int>(r * a)));
                        return std::pair{x, any_beta()};
                    }});
    fams.push_back({"X+X-", [&] {
                        int i = idx(), j = S.uni(0, 2) ? i : idx(), k = deg(), l = deg();
                        Scalar sg = Scalar(rd.simple_parity(i) * rd.simple_parity(j) ? -1 : 1);
                        auto x = gen_word({G::xplus(i, k), G::xminus(j, l)});
                        x.add(gen_word({G::xminus(j, l), G::xplus(i, k)}), -sg);
                        for (auto& [g, c] : mode_bracket_XX(i, k, j, l, a).terms()) x.add(gen_word({g}), -c);
                        return std::pair{x, any_beta()};
                    }});
    // relations among letters of one side
    for (int side : {1, -1}) {
        std::string s = side > 0 ? "+" : "-";
        std::vector<std::pair<int, int>> quad, comm;
        for (int i = 1; i <= rank; ++i)
            for (int j = i; j <= rank; ++j) (rd.A(i, j) != 0 ? quad : comm).push_back({i, j});
        auto weight_of = [&S, rank, side](const RelationInstance& inst, int extra) {
            RootLattice b(static_cast<std::size_t>(rank), 0);
            for (int c : inst.colors) ++b[static_cast<std::size_t>(c - 1)];
            if (side > 0) return b;
            return S.random_beta(extra);
        };
        if (!quad.empty())
            fams.push_back({"quadratic" + s, [&, side, weight_of, quad] {
                                auto [i, j] = quad[static_cast<std::size_t>(S.uni(0, static_cast<int>(quad.size()) - 1))];
                                int k = S.uni(-D, D - 1), l = S.uni(-D, D - 1);
                                auto inst = quadratic_instance(rd, side, i, j, k, l);
                                return std::pair{detail::as_generators(inst.body, side), weight_of(inst, 1)};
                            }});
        if (!comm.empty())
            fams.push_back({"commuting" + s, [&, side, weight_of, comm] {
                                auto [i, j] = comm[static_cast<std::size_t>(S.uni(0, static_cast<int>(comm.size()) - 1))];
                                auto inst = commuting_instance(rd, i, j, deg(), deg());
                                return std::pair{detail::as_generators(inst.body, side), weight_of(inst, 1)};
                            }});
        std::vector<std::pair<int, int>> s3;
        for (int i = 1; i <= rank; ++i)
            for (int j : {i - 1, i + 1})
                if (rd.A(i, i) != 0 && j >= 1 && j <= rank) s3.push_back({i, j});
        if (!s3.empty())
            fams.push_back({"serre3" + s, [&, side, weight_of, s3] {
                                auto [i, j] = s3[static_cast<std::size_t>(S.uni(0, static_cast<int>(s3.size()) - 1))];
                                auto inst = serre3_instance(rd, i, j, deg(), deg(), deg());
                                return std::pair{detail::as_generators(inst.body, side), weight_of(inst, 0)};
                            }});
        std::vector<int> s4;
        for (int i = 2; i < rank; ++i)
            if (rd.A(i, i) == 0) s4.push_back(i);
        if (!s4.empty())
            fams.push_back({"serre4" + s, [&, side, weight_of, s4] {
                                int i = s4[static_cast<std::size_t>(S.uni(0, static_cast<int>(s4.size()) - 1))];
                                auto inst = serre4_instance(rd, i, deg(), deg(), deg(), deg());
                                return std::pair{detail::as_generators(inst.body, side), weight_of(inst, 0)};
                            }});
    }

    for (auto& f : fams) {
        if (!only.empty() && std::find(only.begin(), only.end(), f.name) == only.end()) continue;
        RelationCheck chk{f.name};
        for (int t = 0; t < samples; ++t) {
            auto [x, beta] = f.make();
            QVector v = S.vector(beta, D);
            QVector out = M.act(x, v);
            ++chk.checked;
            if (!out.is_zero()) {
                if (chk.failures++ == 0) {
                    std::string rel;
                    for (auto& [w, c] : x.terms()) rel += (rel.empty() ? "" : " + ") + ("(" + c.str() + ") " + qword_str(w));
                    chk.first_failure = rel + " on " + qvector_str(v) + " gives " + qvector_str(out);
                }
            }
        }
        rep.families.push_back(std::move(chk));
    }
    return rep;
}

/// Cross-engine square: the q = 1 limit of the quantum action agrees with the
/// classical action on the limit vector, for every generator kind.
inline LimitReport limit_consistency_check(const QModule& M, int samples, unsigned seed, int max_height = 2) {
    using G = QGenerator;
    const RootData& rd = M.root_data();
    const int D = M.window(), rank = rd.rank();
    const InducedModule C = M.classical();
    QSampler S(M, seed);
    auto nz = [&] {
        int r = S.uni(1, D);
        return S.uni(0, 1) ? r : -r;
    };
    std::vector<std::pair<std::string, std::function<G()>>> kinds{
        {"X+", [&] { return G::xplus(S.uni(1, rank), S.uni(-D, D)); }},
        {"X-", [&] { return G::xminus(S.uni(1, rank), S.uni(-D, D)); }},
        {"H", [&] { return G::h(S.uni(1, rank), nz()); }},
        {"K", [&] { return G::kgen(S.uni(1, rank), S.uni(0, 1) ? 1 : -1); }},
        {"K-mode", [&] { return G::kmode(S.uni(1, rank), S.uni(0, 1) ? 1 : -1, S.uni(1, D)); }},
        {"q^c", [&] { return G::qc(S.uni(0, 1) ? 1 : -1); }},
        {"q^d", [&] { return G::qd(S.uni(0, 1) ? 1 : -1); }},
        {"{K;k;n}", [&] { return G::div(G::OnK, S.uni(1, rank), S.uni(-1, 1), S.uni(1, 2)); }},
        {"{q^c;k;n}", [&] { return G::div(G::OnC, 0, S.uni(-1, 1), S.uni(1, 2)); }},
        {"{q^d;k;n}", [&] { return G::div(G::OnD, 0, S.uni(-1, 1), S.uni(1, 2)); }},
    };
    LimitReport rep;
    for (auto& [name, make] : kinds) {
        LimitCheck chk{name};
        for (int t = 0; t < samples; ++t) {
            G g = make();
            QVector v = S.vector(S.random_beta(max_height), D);
            InducedVector lhs = QModule::classical_limit(M.act(g, v));
            InducedVector rhs = QModule::classical_apply(C, g, QModule::classical_limit(v));
            ++chk.checked;
            if (!(lhs == rhs) && chk.failures++ == 0) chk.first_failure = g.str() + " on " + qvector_str(v);
        }
        rep.kinds.push_back(std::move(chk));
    }
    return rep;
}

}  // namespace imverma
