#pragma once

// Heisenberg subalgebra H (classical, F = Rational) and H_q (quantum,
// F = Scalar): elements, the bracket, and the phi-generators obtained by
// inverting the (q-deformed) Cartan matrix.

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "imverma/linalg.hpp"
#include "imverma/rootsys.hpp"

namespace imverma {

/// Basis symbol of the Heisenberg algebra.
///   H(i, r)      : H_{i,r}, r != 0
///   Central(r)   : quantum [rc] for r > 0; classical c is Central(1)
///   D            : the degree derivation d
struct HeisKey {
    enum Kind { H, Central, D };
    Kind kind = H;
    int i = 0;
    int r = 0;

    static HeisKey h(int i, int r) {
        if (r == 0) throw AlgebraError("H_{i,0} is not a Heisenberg generator");
        return {H, i, r};
    }
    static HeisKey central(int r = 1) { return {Central, 0, r}; }
    static HeisKey d() { return {D, 0, 0}; }

    std::string str() const {
        switch (kind) {
            case H:
                return "H(" + std::to_string(i) + "," + std::to_string(r) + ")";
            case Central:
                return "[" + std::to_string(r) + "c]";
            default:
                return "d";
        }
    }
    friend auto operator<=>(const HeisKey&, const HeisKey&) = default;
};

template <class F>
class HeisElement {
public:
    HeisElement() = default;
    HeisElement(const HeisKey& k, F c = F(1)) { add(k, c); }  // NOLINT(google-explicit-constructor)

    void add(const HeisKey& k, const F& c) {
        if (Field<F>::is_zero(c)) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (Field<F>::is_zero(it->second)) terms_.erase(it);
        }
    }
    void add(const HeisElement& o, const F& c = F(1)) {
        for (auto& [k, v] : o.terms_) add(k, v * c);
    }
    F coeff(const HeisKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? F(0) : it->second;
    }
    bool is_zero() const noexcept { return terms_.empty(); }
    const std::map<HeisKey, F>& terms() const& noexcept { return terms_; }
    std::map<HeisKey, F> terms() && noexcept { return std::move(terms_); }

    friend HeisElement operator+(HeisElement a, const HeisElement& b) {
        a.add(b);
        return a;
    }
    friend HeisElement operator-(HeisElement a, const HeisElement& b) {
        a.add(b, F(-1));
        return a;
    }
    friend HeisElement operator*(const F& c, const HeisElement& a) {
        HeisElement out;
        out.add(a, c);
        return out;
    }
    friend bool operator==(const HeisElement&, const HeisElement&) = default;

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [k, v] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + Field<F>::str(v) + ")*" + k.str();
        }
        return out;
    }

private:
    std::map<HeisKey, F> terms_;
};

/// Coefficient of the central term of [H_{i,r}, H_{j,-r}]: [rA_ij]/r (quantum,
/// against the symbol [|r|c] with the sign of r folded in) or r*A_ij (classical).
template <class F>
void add_hh_central(HeisElement<F>& out, long Aij, int r, const F& c) {
    if constexpr (Field<F>::quantum) {
        int ar = r > 0 ? r : -r;
        F v = qnum(static_cast<int>(ar * Aij)) / Scalar(ar);
        out.add(HeisKey::central(ar), r > 0 ? F(v * c) : F(-(v * c)));
    } else {
        out.add(HeisKey::central(1), F(Rational(r * Aij)) * c);
    }
}

/// Bracket on the Heisenberg algebra for the Cartan matrix A (A' when m = n).
template <class F>
HeisElement<F> heis_bracket(const HeisElement<F>& x, const HeisElement<F>& y, const std::vector<std::vector<long>>& A) {
    HeisElement<F> out;
    for (auto& [kx, cx] : x.terms())
        for (auto& [ky, cy] : y.terms()) {
            F c = cx * cy;
            if (kx.kind == HeisKey::H && ky.kind == HeisKey::H) {
                if (kx.r + ky.r != 0) continue;
                add_hh_central(out, A.at(kx.i - 1).at(ky.i - 1), kx.r, c);
            } else if (kx.kind == HeisKey::D && ky.kind == HeisKey::H) {
                out.add(ky, c * F(Rational(ky.r)));
            } else if (kx.kind == HeisKey::H && ky.kind == HeisKey::D) {
                out.add(kx, c * F(Rational(-kx.r)));
            }
        }
    return out;
}

/// Value of a central element once the level is fixed: [rc] -> [ra] (quantum), c -> a.
template <class F>
F central_value(const HeisElement<F>& x, long a) {
    F v(0);
    for (auto& [k, c] : x.terms()) {
        if (k.kind != HeisKey::Central) throw AlgebraError("element is not central: " + x.str());
        if constexpr (Field<F>::quantum)
            v = v + c * qnum(static_cast<int>(k.r * a));
        else
            v = v + c * F(Rational(k.r * a));
    }
    return v;
}

/// The phi-generators: phi_{i,r} = H_{i,r} for r > 0 and
/// phi_{i,-r} = sum_j B(r)_{ij} H_{j,-r} with B(r) = r (A(r)^T)^{-1}.
template <class F>
class PhiTable {
public:
    PhiTable(std::vector<std::vector<long>> A, int rmax) : A_(std::move(A)), rmax_(rmax) {
        const std::size_t n = A_.size();
        B_.resize(static_cast<std::size_t>(rmax) + 1);
        Binv_.resize(static_cast<std::size_t>(rmax) + 1);
        for (int r = 1; r <= rmax; ++r) {
            Matrix<F> Ar(n, std::vector<F>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) Ar[i][j] = bracket(r * A_[i][j]);
            auto inv = inverse(transpose(Ar));
            if (!inv) throw AlgebraError("A(r) is singular for r = " + std::to_string(r));
            for (auto& row : *inv)
                for (auto& x : row) x = x * F(Rational(r));
            B_[r] = std::move(*inv);
            // H_{i,-r} = sum_j ([rA_ij]/r) phi_{j,-r}
            Matrix<F> back(n, std::vector<F>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) back[i][j] = Ar[j][i] / F(Rational(r));
            Binv_[r] = std::move(back);
        }
    }

    PhiTable(const RootData& rd, int rmax) : PhiTable(rd.heis_cartan(), rmax) {}

    int rank() const noexcept { return static_cast<int>(A_.size()); }
    int rmax() const noexcept { return rmax_; }
    const std::vector<std::vector<long>>& cartan() const noexcept { return A_; }
    const Matrix<F>& B(int r) const { return B_.at(static_cast<std::size_t>(check(r))); }
    /// Coefficients of H_{i,-r} in the phi_{j,-r} basis.
    const Matrix<F>& B_inverse(int r) const { return Binv_.at(static_cast<std::size_t>(check(r))); }

    HeisElement<F> phi(int i, int r) const {
        if (r == 0) throw AlgebraError("phi_{i,0} is not defined");
        if (r > 0) return HeisElement<F>(HeisKey::h(i, r));
        HeisElement<F> out;
        const auto& b = B(-r);
        for (int j = 1; j <= rank(); ++j) out.add(HeisKey::h(j, r), b[i - 1][j - 1]);
        return out;
    }

    static F bracket(long n) { return Field<F>::bracket_number(n); }

private:
    int check(int r) const {
        if (r < 1 || r > rmax_) throw AlgebraError("phi table built only up to degree " + std::to_string(rmax_));
        return r;
    }

    std::vector<std::vector<long>> A_;
    int rmax_;
    std::vector<Matrix<F>> B_;
    std::vector<Matrix<F>> Binv_;
};

struct PhiRelationEntry {
    int i, j, r, s;
    std::string computed;
    std::string expected;
    bool ok;
};

struct PhiRelationReport {
    int window = 0;
    std::size_t checked = 0;
    std::vector<PhiRelationEntry> mismatches;
    std::size_t grading_checked = 0;
    std::size_t grading_failures = 0;
    bool pass() const { return mismatches.empty() && grading_failures == 0; }
};

/// Checks [phi_{i,r}, phi_{j,s}] = delta_ij delta_{r,-s} [rc] for 0 < |r|,|s| <= D
/// and [d, phi_{i,r}] = r phi_{i,r}.
template <class F>
PhiRelationReport verify_phi_relations(const PhiTable<F>& t, int D) {
    PhiRelationReport rep;
    rep.window = D;
    const int n = t.rank();
    for (int i = 1; i <= n; ++i)
        for (int r = -D; r <= D; ++r) {
            if (r == 0) continue;
            auto pi = t.phi(i, r);
            for (int j = 1; j <= n; ++j)
                for (int s = -D; s <= D; ++s) {
                    if (s == 0) continue;
                    auto got = heis_bracket(pi, t.phi(j, s), t.cartan());
                    HeisElement<F> want;
                    if (i == j && r == -s) {
                        if constexpr (Field<F>::quantum)
                            want.add(HeisKey::central(r > 0 ? r : -r), F(r > 0 ? 1 : -1));
                        else
                            want.add(HeisKey::central(1), F(Rational(r)));
                    }
                    ++rep.checked;
                    if (!(got == want)) rep.mismatches.push_back({i, j, r, s, got.str(), want.str(), false});
                }
            auto g = heis_bracket(HeisElement<F>(HeisKey::d()), pi, t.cartan());
            ++rep.grading_checked;
            if (!(g == F(Rational(r)) * pi)) ++rep.grading_failures;
        }
    return rep;
}

}  // namespace imverma
