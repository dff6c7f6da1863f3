#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "kaczmarz/types.hpp"

namespace kaczmarz {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Immutable CSR matrix with cached squared row norms.
///
/// Column indices are strictly increasing within each row. Every row must
/// carry at least one entry with a nonzero value; construction throws
/// ZeroRowError otherwise (callers that want zero rows removed do so at
/// ingestion, see problems::load_matrix_market). Duplicate (row, col)
/// coordinates are summed. Safe for concurrent shared reads.
class SparseRowMatrix {
public:
    SparseRowMatrix() = default;

    /// Entries need not be sorted; duplicates are summed.
    static SparseRowMatrix from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries);

    /// Stores every entry of the row-major block, including zeros, so a
    /// dense source keeps density 1. Throws ZeroRowError on an all-zero row.
    static SparseRowMatrix from_dense(std::size_t rows, std::size_t cols,
                                      std::span<const double> row_major);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_indices(std::size_t i) const;
    std::span<const double> row_values(std::size_t i) const;

    /// Cached M(i) = ||a_i||^2.
    double row_norm_sq(std::size_t i) const;
    std::span<const double> row_norms_sq() const noexcept { return row_norms_sq_; }
    double frob_norm_sq() const noexcept { return frob_sq_; }

    /// <a_i, x>
    double row_dot(std::size_t i, std::span<const double> x) const;

    /// <a_i, a_j> by sorted merge over the two rows' stored entries.
    double row_pair_dot(std::size_t i, std::size_t j) const;

    /// out = A x
    void multiply(std::span<const double> x, std::span<double> out) const;
    Vector multiply(std::span<const double> x) const;

    /// out = b - A x
    void residual(std::span<const double> b, std::span<const double> x,
                  std::span<double> out) const;
    Vector residual(std::span<const double> b, std::span<const double> x) const;

    /// Stored entries as (row, col, value), row-major. Round-trips through
    /// from_triplets.
    std::vector<Triplet> to_triplets() const;

private:
    void check_row(std::size_t i) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_offsets_;  // length rows_ + 1
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
    std::vector<double> row_norms_sq_;
    double frob_sq_ = 0.0;
};

/// Scales each row of `a` to unit Euclidean norm and scales `b` identically,
/// leaving the solution set of the system unchanged.
std::pair<SparseRowMatrix, Vector> normalize_rows(const SparseRowMatrix& a,
                                                  std::span<const double> b);

/// ||b - A x||^2 / ||b||^2, the stopping quantity. For b = 0 the value is 0
/// when the residual also vanishes; otherwise the quantity is undefined and
/// this throws.
double rre(const SparseRowMatrix& a, std::span<const double> b,
           std::span<const double> x);

}  // namespace kaczmarz
