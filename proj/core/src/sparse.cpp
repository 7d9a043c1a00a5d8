#include "tagrank/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tagrank/errors.hpp"
#include "tagrank/util.hpp"

namespace tagrank {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), offsets_(rows + 1, 0) {}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> offsets,
                           std::vector<std::uint32_t> columns, std::vector<double> values)
    : rows_(rows), cols_(cols), offsets_(std::move(offsets)), columns_(std::move(columns)),
      values_(std::move(values)) {
    check_structure();
}

void SparseMatrix::check_structure() const {
    if (offsets_.size() != rows_ + 1 || offsets_.front() != 0 ||
        offsets_.back() != columns_.size() || columns_.size() != values_.size()) {
        throw DataError("sparse matrix: inconsistent offsets");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        if (offsets_[i] > offsets_[i + 1]) {
            throw DataError("sparse matrix: non-monotone offsets");
        }
        for (std::size_t p = offsets_[i]; p < offsets_[i + 1]; ++p) {
            if (columns_[p] >= cols_) {
                throw DataError("sparse matrix: column index out of range");
            }
            if (p > offsets_[i] && columns_[p] <= columns_[p - 1]) {
                throw DataError("sparse matrix: columns not strictly increasing");
            }
            if (!std::isfinite(values_[p]) || values_[p] < 0.0) {
                throw DataError("sparse matrix: non-finite or negative value");
            }
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row >= rows || t.col >= cols) {
            throw DataError("sparse matrix: triplet out of range");
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    std::vector<std::size_t> offsets(rows + 1, 0);
    std::vector<std::uint32_t> columns;
    std::vector<double> values;
    columns.reserve(entries.size());
    values.reserve(entries.size());

    std::size_t pos = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        while (pos < entries.size() && entries[pos].row == i) {
            double v = entries[pos].value;
            std::uint32_t c = entries[pos].col;
            ++pos;
            while (pos < entries.size() && entries[pos].row == i && entries[pos].col == c) {
                v += entries[pos].value;
                ++pos;
            }
            if (v != 0.0) {
                columns.push_back(c);
                values.push_back(v);
            }
        }
        offsets[i + 1] = columns.size();
    }
    return SparseMatrix(rows, cols, std::move(offsets), std::move(columns), std::move(values));
}

double SparseMatrix::at(std::size_t row, std::uint32_t col) const {
    auto cols_span = row_columns(row);
    auto it = std::lower_bound(cols_span.begin(), cols_span.end(), col);
    if (it == cols_span.end() || *it != col) {
        return 0.0;
    }
    return values_[offsets_[row] + static_cast<std::size_t>(it - cols_span.begin())];
}

std::vector<double> SparseMatrix::row_sums() const {
    std::vector<double> sums(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        sums[i] = kahan_sum(row_values(i));
    }
    return sums;
}

SparseMatrix transpose(const SparseMatrix& m) {
    std::vector<std::size_t> offsets(m.cols() + 1, 0);
    for (std::uint32_t c : m.columns()) {
        ++offsets[c + 1];
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
        offsets[c + 1] += offsets[c];
    }
    std::vector<std::uint32_t> columns(m.entry_count());
    std::vector<double> values(m.entry_count());
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto cols_span = m.row_columns(i);
        auto vals_span = m.row_values(i);
        for (std::size_t p = 0; p < cols_span.size(); ++p) {
            std::size_t dst = cursor[cols_span[p]]++;
            columns[dst] = static_cast<std::uint32_t>(i);
            values[dst] = vals_span[p];
        }
    }
    return SparseMatrix(m.cols(), m.rows(), std::move(offsets), std::move(columns),
                        std::move(values));
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DataError("sparse multiply: dimension mismatch");
    }
    const std::size_t n = b.cols();
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> touched;

    std::vector<std::size_t> offsets(a.rows() + 1, 0);
    std::vector<std::uint32_t> columns;
    std::vector<double> values;

    for (std::size_t i = 0; i < a.rows(); ++i) {
        touched.clear();
        auto a_cols = a.row_columns(i);
        auto a_vals = a.row_values(i);
        for (std::size_t p = 0; p < a_cols.size(); ++p) {
            const double av = a_vals[p];
            auto b_cols = b.row_columns(a_cols[p]);
            auto b_vals = b.row_values(a_cols[p]);
            for (std::size_t q = 0; q < b_cols.size(); ++q) {
                std::uint32_t j = b_cols[q];
                if (acc[j] == 0.0) {
                    touched.push_back(j);
                }
                acc[j] += av * b_vals[q];
            }
        }
        std::sort(touched.begin(), touched.end());
        std::uint32_t prev = std::numeric_limits<std::uint32_t>::max();
        for (std::uint32_t j : touched) {
            if (j == prev) {
                continue; // an underflow-to-zero can record a column twice
            }
            prev = j;
            if (acc[j] != 0.0) {
                columns.push_back(j);
                values.push_back(acc[j]);
                acc[j] = 0.0;
            }
        }
        offsets[i + 1] = columns.size();
    }
    return SparseMatrix(a.rows(), n, std::move(offsets), std::move(columns), std::move(values));
}

SparseMatrix multiply_transposed(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw DataError("sparse multiply_transposed: dimension mismatch");
    }
    return multiply(a, transpose(b));
}

namespace {

template <typename Merge>
SparseMatrix merge_rows(const SparseMatrix& a, const SparseMatrix& b, bool intersect,
                        Merge&& merge) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DataError("sparse entrywise op: dimension mismatch");
    }
    std::vector<std::size_t> offsets(a.rows() + 1, 0);
    std::vector<std::uint32_t> columns;
    std::vector<double> values;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ac = a.row_columns(i);
        auto av = a.row_values(i);
        auto bc = b.row_columns(i);
        auto bv = b.row_values(i);
        std::size_t p = 0;
        std::size_t q = 0;
        while (p < ac.size() || q < bc.size()) {
            if (q == bc.size() || (p < ac.size() && ac[p] < bc[q])) {
                if (!intersect) {
                    columns.push_back(ac[p]);
                    values.push_back(av[p]);
                }
                ++p;
            } else if (p == ac.size() || bc[q] < ac[p]) {
                if (!intersect) {
                    columns.push_back(bc[q]);
                    values.push_back(bv[q]);
                }
                ++q;
            } else {
                double v = merge(av[p], bv[q]);
                if (v != 0.0) {
                    columns.push_back(ac[p]);
                    values.push_back(v);
                }
                ++p;
                ++q;
            }
        }
        offsets[i + 1] = columns.size();
    }
    return SparseMatrix(a.rows(), a.cols(), std::move(offsets), std::move(columns),
                        std::move(values));
}

} // namespace

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b) {
    return merge_rows(a, b, /*intersect=*/false, [](double x, double y) { return x + y; });
}

SparseMatrix hadamard(const SparseMatrix& a, const SparseMatrix& b) {
    return merge_rows(a, b, /*intersect=*/true, [](double x, double y) { return x * y; });
}

RowNormalizeResult normalize_rows(const SparseMatrix& m) {
    std::vector<double> values(m.values());
    std::vector<std::uint32_t> dangling;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sum = kahan_sum(m.row_values(i));
        if (sum <= 0.0) {
            dangling.push_back(static_cast<std::uint32_t>(i));
            continue;
        }
        for (std::size_t p = m.offsets()[i]; p < m.offsets()[i + 1]; ++p) {
            values[p] /= sum;
        }
    }
    SparseMatrix normalized(m.rows(), m.cols(), m.offsets(), m.columns(), std::move(values));
    return {std::move(normalized), std::move(dangling)};
}

void apply_transposed(const SparseMatrix& m, std::span<const double> x, std::span<double> y) {
    if (x.size() != m.rows() || y.size() != m.cols()) {
        throw DataError("apply_transposed: vector size mismatch");
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) {
            continue;
        }
        auto cols = m.row_columns(i);
        auto vals = m.row_values(i);
        for (std::size_t p = 0; p < cols.size(); ++p) {
            y[cols[p]] += vals[p] * xi;
        }
    }
}

} // namespace tagrank
