#ifndef ROBBA_PLINALG_HPP
#define ROBBA_PLINALG_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "robba/padic.hpp"
#include "robba/rational.hpp"

namespace robba {

// Dense matrix over Q_p at capped precision. Boundary maps of the Herr
// complexes are fed in through the sparse interface below; this dense
// form is the JSON-facing surface and is fine for desk-scale sizes.
class PadicMatrix {
  public:
    PadicMatrix(std::size_t rows, std::size_t cols, std::uint32_t prime);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint32_t prime() const { return prime_; }

    const PadicScalar& at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const PadicScalar& v);

    // weakest absolute precision among non-exact entries; +inf if all exact
    RatInf min_abs_precision() const;

    static PadicMatrix identity(std::size_t n, std::uint32_t prime, int relprec);

  private:
    std::size_t rows_, cols_;
    std::uint32_t prime_;
    std::vector<PadicScalar> data_;
};

struct EchelonResult {
    PadicMatrix echelon;           // row echelon form (row ops only, column pivoting free)
    std::vector<std::int64_t> pivot_valuations;
    std::vector<std::size_t> pivot_rows;
    std::vector<std::size_t> pivot_cols;
};

// Gaussian elimination with minimal-valuation (max-norm) pivot
// selection, the p-adically stable choice.
EchelonResult row_echelon(const PadicMatrix& A);

// number of pivots of valuation < tol; entries at or beyond tol count
// as numerically zero. Throws precision_error when an entry's absolute
// precision cannot support the decision.
int rank_with_tolerance(const PadicMatrix& A, const Rational& tol_valuation);

// vectors v with A v = 0 up to valuation >= tol
std::vector<std::vector<PadicScalar>> kernel_basis(const PadicMatrix& A,
                                                   const Rational& tol_valuation);

// ---------------------------------------------------------------- sparse core

// Column-major sparse matrix; the workhorse behind complex boundary
// maps. Rows of each column are kept sorted by index.
struct SparseMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint32_t prime = 3;
    std::vector<std::vector<std::pair<std::size_t, PadicScalar>>> columns;

    SparseMat() = default;
    SparseMat(std::size_t r, std::size_t c, std::uint32_t p)
        : rows(r), cols(c), prime(p), columns(c) {}

    void add_entry(std::size_t r, std::size_t c, const PadicScalar& v);
    void sort_columns();
    std::size_t nnz() const;
};

SparseMat sparse_multiply(const SparseMat& A, const SparseMat& B);
SparseMat sparse_sub(const SparseMat& A, const SparseMat& B);

// min valuation over all entries; +inf for the zero matrix
RatInf sparse_min_valuation(const SparseMat& A);

struct SparseElimResult {
    int rank = 0;
    // kernel vectors as sparse columns over the domain index set
    std::vector<std::vector<std::pair<std::size_t, PadicScalar>>> kernel;
};

// rank and kernel at the given valuation tolerance; deterministic
// pivoting (min valuation, then lowest row index)
SparseElimResult sparse_rank_kernel(const SparseMat& A, const Rational& tol,
                                    bool want_kernel);

PadicMatrix sparse_to_dense(const SparseMat& A);

} // namespace robba

#endif
