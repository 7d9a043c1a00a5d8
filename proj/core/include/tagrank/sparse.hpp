#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tagrank/types.hpp"

namespace tagrank {

/// Row-compressed (CSR) sparse matrix of non-negative finite doubles.
///
/// Invariants, checked on construction:
///   - offsets has rows()+1 entries, is monotone, and ends at entry_count()
///   - column indices are strictly increasing within each row and < cols()
///   - every stored value is finite and >= 0
///
/// Builders in this library never store explicit zeros, so "stored entry"
/// coincides with "mathematically nonzero" everywhere support matters.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> offsets,
                 std::vector<std::uint32_t> columns, std::vector<double> values);

    struct Triplet {
        std::size_t row = 0;
        std::uint32_t col = 0;
        double value = 0.0;
    };

    /// Builds from unordered triplets. Duplicate (row, col) pairs are summed;
    /// exact zeros are dropped.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<Triplet> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t entry_count() const { return values_.size(); }

    std::span<const std::uint32_t> row_columns(std::size_t row) const {
        return {columns_.data() + offsets_[row], columns_.data() + offsets_[row + 1]};
    }
    std::span<const double> row_values(std::size_t row) const {
        return {values_.data() + offsets_[row], values_.data() + offsets_[row + 1]};
    }

    /// Value at (row, col); 0 when the entry is not stored.
    double at(std::size_t row, std::uint32_t col) const;

    /// Compensated per-row sums.
    std::vector<double> row_sums() const;

    const std::vector<std::size_t>& offsets() const { return offsets_; }
    const std::vector<std::uint32_t>& columns() const { return columns_; }
    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    void check_structure() const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> columns_;
    std::vector<double> values_;
};

SparseMatrix transpose(const SparseMatrix& m);

/// C = A * B. Gustavson row-by-row product; workspace is O(cols(B)), never
/// rows x cols.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

/// C = A * B^T, the shape used for assembling tag adjacency from submatrices.
SparseMatrix multiply_transposed(const SparseMatrix& a, const SparseMatrix& b);

/// Entrywise sum; inputs must have identical dimensions.
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b);

/// Entrywise (Hadamard) product; the result's support is the intersection of
/// the input supports.
SparseMatrix hadamard(const SparseMatrix& a, const SparseMatrix& b);

struct RowNormalizeResult {
    SparseMatrix matrix;
    std::vector<std::uint32_t> dangling_rows; // rows whose sum was zero, left as-is
};

/// Divides every row with a positive sum by that sum. All-zero rows are kept
/// untouched and reported as dangling.
RowNormalizeResult normalize_rows(const SparseMatrix& m);

/// y[j] = sum_i m(i, j) * x[i]. Propagates mass along rows; the vector side
/// of one power-iteration step. y must have cols() entries, x rows() entries.
void apply_transposed(const SparseMatrix& m, std::span<const double> x, std::span<double> y);

} // namespace tagrank
