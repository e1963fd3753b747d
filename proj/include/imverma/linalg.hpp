#pragma once

// Exact linear algebra over a coefficient field F (Rational or Scalar):
// sparse vectors, an incremental row-echelon basis with optional provenance
// tracking, and small dense inversion.

#include <map>
#include <optional>
#include <vector>

#include "imverma/scalar.hpp"

namespace imverma {

template <class F>
using SparseVec = std::map<int, F>;

template <class F>
void axpy(SparseVec<F>& y, const F& a, const SparseVec<F>& x) {
    for (auto& [k, v] : x) {
        auto it = y.find(k);
        if (it == y.end()) {
            y.emplace(k, a * v);
        } else {
            it->second = it->second + a * v;
            if (Field<F>::is_zero(it->second)) y.erase(it);
        }
    }
}

template <class F>
void scale(SparseVec<F>& y, const F& a) {
    for (auto& [k, v] : y) v = v * a;
}

/// Incremental row-echelon form. Each stored row has leading coefficient 1 at
/// its pivot (its smallest column). When tracking is on, every row also records
/// which combination of inserted vectors produced it.
template <class F>
class Echelon {
public:
    explicit Echelon(bool track = false) : track_(track) {}

    struct Row {
        SparseVec<F> v;
        SparseVec<F> prov;
    };

    std::size_t rank() const noexcept { return rows_.size(); }
    bool has_pivot(int col) const { return rows_.count(col) != 0; }
    const std::map<int, Row>& rows() const noexcept { return rows_; }

    /// Reduces v in place against the stored rows; prov accumulates the
    /// subtracted combination of inserted vectors.
    void reduce(SparseVec<F>& v, SparseVec<F>* prov = nullptr) const {
        auto it = v.begin();
        while (it != v.end()) {
            int col = it->first;
            auto r = rows_.find(col);
            if (r == rows_.end()) {
                ++it;
                continue;
            }
            F c = it->second;
            axpy(v, F(-c), r->second.v);
            if (prov && track_) axpy(*prov, F(-c), r->second.prov);
            it = v.upper_bound(col);
        }
    }

    /// Inserts v (with index id for provenance). Returns false if v was dependent.
    bool insert(SparseVec<F> v, int id = -1) {
        SparseVec<F> prov;
        if (track_) prov.emplace(id, F(1));
        reduce(v, &prov);
        if (v.empty()) return false;
        F inv = F(1) / v.begin()->second;
        scale(v, inv);
        if (track_) scale(prov, inv);
        int pivot = v.begin()->first;
        rows_.emplace(pivot, Row{std::move(v), std::move(prov)});
        return true;
    }

    bool contains(SparseVec<F> v) const {
        reduce(v);
        return v.empty();
    }

    /// Writes v as a combination of inserted vectors, if it lies in their span.
    std::optional<SparseVec<F>> express(SparseVec<F> v) const {
        SparseVec<F> prov;
        reduce(v, &prov);
        if (!v.empty()) return std::nullopt;
        scale(prov, F(-1));
        return prov;
    }

private:
    bool track_;
    std::map<int, Row> rows_;
};

template <class F>
using Matrix = std::vector<std::vector<F>>;

/// Inverse of a square matrix; nullopt when singular.
template <class F>
std::optional<Matrix<F>> inverse(Matrix<F> a) {
    const std::size_t n = a.size();
    Matrix<F> inv(n, std::vector<F>(n, F(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = F(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && Field<F>::is_zero(a[p][c])) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        F piv = F(1) / a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] = a[c][k] * piv;
            inv[c][k] = inv[c][k] * piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || Field<F>::is_zero(a[r][c])) continue;
            F f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] = a[r][k] - f * a[c][k];
                inv[r][k] = inv[r][k] - f * inv[c][k];
            }
        }
    }
    return inv;
}

template <class F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b) {
    Matrix<F> out(a.size(), std::vector<F>(b.empty() ? 0 : b[0].size(), F(0)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (Field<F>::is_zero(a[i][k])) continue;
            for (std::size_t j = 0; j < out[i].size(); ++j) out[i][j] = out[i][j] + a[i][k] * b[k][j];
        }
    return out;
}

template <class F>
Matrix<F> transpose(const Matrix<F>& a) {
    Matrix<F> t(a.empty() ? 0 : a[0].size(), std::vector<F>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

}  // namespace imverma
