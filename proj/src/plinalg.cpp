#include "robba/plinalg.hpp"

#include <algorithm>
#include <map>

#include "robba/errors.hpp"

namespace robba {

// ---------------------------------------------------------------- PadicMatrix

PadicMatrix::PadicMatrix(std::size_t rows, std::size_t cols, std::uint32_t prime)
    : rows_(rows), cols_(cols), prime_(prime),
      data_(rows * cols, PadicScalar::zero(prime)) {}

const PadicScalar& PadicMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw invalid_argument_error("matrix index out of range");
    return data_[r * cols_ + c];
}

void PadicMatrix::set(std::size_t r, std::size_t c, const PadicScalar& v) {
    if (r >= rows_ || c >= cols_) throw invalid_argument_error("matrix index out of range");
    if (v.prime() != prime_) throw invalid_argument_error("prime mismatch");
    data_[r * cols_ + c] = v;
}

RatInf PadicMatrix::min_abs_precision() const {
    RatInf m = RatInf::infinity();
    for (const auto& x : data_)
        if (!x.is_exact_zero()) m = min(m, x.abs_precision());
    return m;
}

PadicMatrix PadicMatrix::identity(std::size_t n, std::uint32_t prime, int relprec) {
    PadicMatrix I(n, n, prime);
    for (std::size_t i = 0; i < n; ++i)
        I.set(i, i, PadicScalar::from_integer(1, prime, relprec));
    return I;
}

// ---------------------------------------------------------------- dense echelon

namespace {

// usable pivot: finite valuation, known digits
bool pivot_candidate(const PadicScalar& x) {
    return !x.is_exact_zero() && !x.valuation_is_lower_bound();
}

} // namespace

EchelonResult row_echelon(const PadicMatrix& A) {
    std::size_t m = A.rows(), n = A.cols();
    std::vector<std::vector<PadicScalar>> w(m, std::vector<PadicScalar>(n, PadicScalar::zero(A.prime())));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            w[i][j] = A.at(i, j);

    EchelonResult out{PadicMatrix(m, n, A.prime()), {}, {}, {}};
    std::vector<bool> row_used(m, false), col_used(n, false);

    // full pivoting: the smallest-valuation entry of the remaining
    // submatrix (ties broken by row, then column, for determinism)
    while (true) {
        std::optional<std::pair<std::size_t, std::size_t>> pos;
        std::int64_t pv = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (col_used[j] || !pivot_candidate(w[i][j])) continue;
                std::int64_t v = w[i][j].valuation_int();
                if (!pos || v < pv) { pos = {i, j}; pv = v; }
            }
        }
        if (!pos) break;
        auto [pr, pc] = *pos;
        row_used[pr] = true;
        col_used[pc] = true;
        out.pivot_rows.push_back(pr);
        out.pivot_cols.push_back(pc);
        out.pivot_valuations.push_back(pv);
        PadicScalar inv = w[pr][pc].invert();
        for (std::size_t i = 0; i < m; ++i) {
            if (i == pr || row_used[i] || w[i][pc].is_exact_zero()) continue;
            PadicScalar factor = w[i][pc].mul(inv);
            for (std::size_t j = 0; j < n; ++j) {
                if (w[pr][j].is_exact_zero()) continue;
                w[i][j] = w[i][j].sub(factor.mul(w[pr][j]));
            }
        }
    }

    // emit pivot rows first (in pivot order), then the remaining rows
    std::size_t r = 0;
    for (std::size_t k = 0; k < out.pivot_rows.size(); ++k, ++r)
        for (std::size_t j = 0; j < n; ++j)
            out.echelon.set(r, j, w[out.pivot_rows[k]][j]);
    for (std::size_t i = 0; i < m; ++i) {
        if (row_used[i]) continue;
        for (std::size_t j = 0; j < n; ++j)
            out.echelon.set(r, j, w[i][j]);
        ++r;
    }
    return out;
}

// ---------------------------------------------------------------- sparse core

void SparseMat::add_entry(std::size_t r, std::size_t c, const PadicScalar& v) {
    if (r >= rows || c >= cols) throw invalid_argument_error("sparse index out of range");
    if (v.is_exact_zero()) return;
    columns[c].emplace_back(r, v);
}

void SparseMat::sort_columns() {
    for (auto& col : columns) {
        std::sort(col.begin(), col.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        // combine duplicates
        std::vector<std::pair<std::size_t, PadicScalar>> merged;
        for (const auto& [r, v] : col) {
            if (!merged.empty() && merged.back().first == r)
                merged.back().second = merged.back().second.add(v);
            else
                merged.emplace_back(r, v);
        }
        col.clear();
        for (auto& [r, v] : merged)
            if (!v.is_exact_zero()) col.emplace_back(r, v);
    }
}

std::size_t SparseMat::nnz() const {
    std::size_t n = 0;
    for (const auto& c : columns) n += c.size();
    return n;
}

SparseMat sparse_multiply(const SparseMat& A, const SparseMat& B) {
    if (A.cols != B.rows) throw invalid_argument_error("sparse_multiply shape mismatch");
    SparseMat C(A.rows, B.cols, A.prime);
    for (std::size_t j = 0; j < B.cols; ++j) {
        std::map<std::size_t, PadicScalar> acc;
        for (const auto& [k, bv] : B.columns[j]) {
            for (const auto& [i, av] : A.columns[k]) {
                PadicScalar t = av.mul(bv);
                auto it = acc.find(i);
                if (it == acc.end()) acc.emplace(i, t);
                else it->second = it->second.add(t);
            }
        }
        for (const auto& [i, v] : acc)
            if (!v.is_exact_zero()) C.columns[j].emplace_back(i, v);
    }
    return C;
}

SparseMat sparse_sub(const SparseMat& A, const SparseMat& B) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw invalid_argument_error("sparse_sub shape mismatch");
    SparseMat C(A.rows, A.cols, A.prime);
    for (std::size_t j = 0; j < A.cols; ++j) {
        std::map<std::size_t, PadicScalar> acc;
        for (const auto& [i, v] : A.columns[j]) {
            auto it = acc.find(i);
            if (it == acc.end()) acc.emplace(i, v);
            else it->second = it->second.add(v);
        }
        for (const auto& [i, v] : B.columns[j]) {
            auto it = acc.find(i);
            if (it == acc.end()) acc.emplace(i, v.negate());
            else it->second = it->second.sub(v);
        }
        for (const auto& [i, v] : acc)
            if (!v.is_exact_zero()) C.columns[j].emplace_back(i, v);
    }
    return C;
}

RatInf sparse_min_valuation(const SparseMat& A) {
    RatInf m = RatInf::infinity();
    for (const auto& col : A.columns)
        for (const auto& [r, v] : col)
            m = min(m, v.valuation());
    return m;
}

namespace {

using SparseCol = std::vector<std::pair<std::size_t, PadicScalar>>;

// c := c - factor * pivot  (both sorted by row index)
SparseCol axpy(const SparseCol& c, const PadicScalar& factor, const SparseCol& pivot) {
    SparseCol out;
    out.reserve(c.size() + pivot.size());
    std::size_t i = 0, j = 0;
    while (i < c.size() || j < pivot.size()) {
        if (j >= pivot.size() || (i < c.size() && c[i].first < pivot[j].first)) {
            out.push_back(c[i++]);
        } else if (i >= c.size() || pivot[j].first < c[i].first) {
            PadicScalar v = factor.mul(pivot[j].second).negate();
            if (!v.is_exact_zero()) out.emplace_back(pivot[j].first, v);
            ++j;
        } else {
            PadicScalar v = c[i].second.sub(factor.mul(pivot[j].second));
            if (!v.is_exact_zero()) out.emplace_back(c[i].first, v);
            ++i; ++j;
        }
    }
    return out;
}

// entry usable as pivot under tolerance; throws if precision cannot decide
bool entry_significant(const PadicScalar& x, const Rational& tol) {
    if (x.is_exact_zero()) return false;
    if (x.valuation_is_lower_bound()) {
        // O(p^A): zero at tolerance iff A >= tol
        if (x.valuation() >= RatInf(tol)) return false;
        throw precision_error("indeterminate rank: raise precision");
    }
    return x.valuation() < RatInf(tol);
}

// inverse of the pivot entry inside a stored (sorted) pivot column
PadicScalar pivot_inverse(const SparseCol& col, std::size_t prow) {
    auto it = std::lower_bound(col.begin(), col.end(), prow,
                               [](const auto& a, std::size_t r) { return a.first < r; });
    if (it == col.end() || it->first != prow)
        throw invalid_argument_error("pivot entry missing");
    return it->second.invert();
}

} // namespace

SparseElimResult sparse_rank_kernel(const SparseMat& A, const Rational& tol,
                                    bool want_kernel) {
    SparseElimResult out;
    // pivot rows already consumed: row -> (column data, combo) of the pivot
    std::vector<std::pair<SparseCol, SparseCol>> pivots; // (column, domain combo)
    std::vector<std::size_t> pivot_rows;

    for (std::size_t j = 0; j < A.cols; ++j) {
        SparseCol col = A.columns[j];
        std::sort(col.begin(), col.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseCol combo;
        combo.emplace_back(j, PadicScalar::from_integer(1, A.prime,
                                                        max_relative_precision(A.prime)));
        // reduce against existing pivots in their creation order
        for (std::size_t k = 0; k < pivots.size(); ++k) {
            std::size_t prow = pivot_rows[k];
            auto it = std::lower_bound(col.begin(), col.end(), prow,
                                       [](const auto& a, std::size_t r) { return a.first < r; });
            if (it == col.end() || it->first != prow) continue;
            PadicScalar factor = it->second.mul(pivot_inverse(pivots[k].first, prow));
            col = axpy(col, factor, pivots[k].first);
            if (want_kernel) combo = axpy(combo, factor, pivots[k].second);
        }
        // find min-valuation significant entry
        std::optional<std::size_t> best;
        std::int64_t bestv = 0;
        for (std::size_t i = 0; i < col.size(); ++i) {
            if (!entry_significant(col[i].second, tol)) continue;
            std::int64_t v = col[i].second.valuation_int();
            if (!best || v < bestv || (v == bestv && col[i].first < col[*best].first)) {
                best = i; bestv = v;
            }
        }
        if (best) {
            pivot_rows.push_back(col[*best].first);
            pivots.emplace_back(std::move(col), std::move(combo));
            ++out.rank;
        } else if (want_kernel) {
            out.kernel.push_back(std::move(combo));
        }
    }
    return out;
}

// ------------------------------------------------------- dense rank and kernel

int rank_with_tolerance(const PadicMatrix& A, const Rational& tol_valuation) {
    RatInf mp = A.min_abs_precision();
    if (mp < RatInf(tol_valuation))
        throw precision_error("tolerance exceeds matrix precision: indeterminate rank");
    SparseMat S(A.rows(), A.cols(), A.prime());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (!A.at(i, j).is_exact_zero()) S.add_entry(i, j, A.at(i, j));
    return sparse_rank_kernel(S, tol_valuation, false).rank;
}

std::vector<std::vector<PadicScalar>> kernel_basis(const PadicMatrix& A,
                                                   const Rational& tol_valuation) {
    RatInf mp = A.min_abs_precision();
    if (mp < RatInf(tol_valuation))
        throw precision_error("tolerance exceeds matrix precision: indeterminate rank");
    SparseMat S(A.rows(), A.cols(), A.prime());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            if (!A.at(i, j).is_exact_zero()) S.add_entry(i, j, A.at(i, j));
    auto res = sparse_rank_kernel(S, tol_valuation, true);
    std::vector<std::vector<PadicScalar>> out;
    for (const auto& kv : res.kernel) {
        std::vector<PadicScalar> v(A.cols(), PadicScalar::zero(A.prime()));
        for (const auto& [idx, val] : kv) v[idx] = val;
        out.push_back(std::move(v));
    }
    return out;
}

PadicMatrix sparse_to_dense(const SparseMat& A) {
    PadicMatrix M(A.rows, A.cols, A.prime);
    for (std::size_t j = 0; j < A.cols; ++j)
        for (const auto& [i, v] : A.columns[j])
            M.set(i, j, M.at(i, j).add(v));
    return M;
}

} // namespace robba
