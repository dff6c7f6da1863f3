#include "kaczmarz/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kaczmarz {

SparseRowMatrix SparseRowMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                               std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
        if (t.row >= rows)
            throw std::out_of_range("from_triplets: row index " + std::to_string(t.row) +
                                    " out of range");
        if (t.col >= cols)
            throw std::out_of_range("from_triplets: col index " + std::to_string(t.col) +
                                    " out of range");
        if (!std::isfinite(t.value))
            throw std::invalid_argument("from_triplets: non-finite value");
    }

    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseRowMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_offsets_.assign(rows + 1, 0);
    m.col_indices_.reserve(entries.size());
    m.values_.reserve(entries.size());

    std::size_t pos = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        m.row_offsets_[i] = m.values_.size();
        while (pos < entries.size() && entries[pos].row == i) {
            const std::size_t col = entries[pos].col;
            double sum = 0.0;
            while (pos < entries.size() && entries[pos].row == i && entries[pos].col == col) {
                sum += entries[pos].value;  // duplicates are summed
                ++pos;
            }
            m.col_indices_.push_back(col);
            m.values_.push_back(sum);
        }
    }
    m.row_offsets_[rows] = m.values_.size();

    m.row_norms_sq_.resize(rows);
    m.frob_sq_ = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (std::size_t k = m.row_offsets_[i]; k < m.row_offsets_[i + 1]; ++k)
            s += m.values_[k] * m.values_[k];
        if (s == 0.0)
            throw ZeroRowError(i, "row " + std::to_string(i) + " has no nonzero entry");
        m.row_norms_sq_[i] = s;
        m.frob_sq_ += s;
    }
    return m;
}

SparseRowMatrix SparseRowMatrix::from_dense(std::size_t rows, std::size_t cols,
                                            std::span<const double> row_major) {
    if (row_major.size() != rows * cols)
        throw ShapeError("from_dense: expected rows*cols entries");
    vec::ensure_finite(row_major, "from_dense");

    SparseRowMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_offsets_.resize(rows + 1);
    m.col_indices_.resize(rows * cols);
    m.values_.assign(row_major.begin(), row_major.end());
    m.row_norms_sq_.resize(rows);
    m.frob_sq_ = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        m.row_offsets_[i] = i * cols;
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            m.col_indices_[i * cols + j] = j;
            s += row_major[i * cols + j] * row_major[i * cols + j];
        }
        if (s == 0.0)
            throw ZeroRowError(i, "row " + std::to_string(i) + " has no nonzero entry");
        m.row_norms_sq_[i] = s;
        m.frob_sq_ += s;
    }
    m.row_offsets_[rows] = rows * cols;
    return m;
}

void SparseRowMatrix::check_row(std::size_t i) const {
    if (i >= rows_)
        throw std::out_of_range("row index " + std::to_string(i) + " out of range");
}

std::span<const std::size_t> SparseRowMatrix::row_indices(std::size_t i) const {
    check_row(i);
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
}

std::span<const double> SparseRowMatrix::row_values(std::size_t i) const {
    check_row(i);
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
}

double SparseRowMatrix::row_norm_sq(std::size_t i) const {
    check_row(i);
    return row_norms_sq_[i];
}

double SparseRowMatrix::row_dot(std::size_t i, std::span<const double> x) const {
    check_row(i);
    if (x.size() != cols_)
        throw ShapeError("row_dot: vector length != cols");
    double s = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        s += values_[k] * x[col_indices_[k]];
    return s;
}

double SparseRowMatrix::row_pair_dot(std::size_t i, std::size_t j) const {
    check_row(i);
    check_row(j);
    std::size_t p = row_offsets_[i], pe = row_offsets_[i + 1];
    std::size_t q = row_offsets_[j], qe = row_offsets_[j + 1];
    double s = 0.0;
    while (p < pe && q < qe) {
        const std::size_t cp = col_indices_[p], cq = col_indices_[q];
        if (cp == cq) {
            s += values_[p] * values_[q];
            ++p;
            ++q;
        } else if (cp < cq) {
            ++p;
        } else {
            ++q;
        }
    }
    return s;
}

void SparseRowMatrix::multiply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != cols_ || out.size() != rows_)
        throw ShapeError("multiply: shape mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            s += values_[k] * x[col_indices_[k]];
        out[i] = s;
    }
}

Vector SparseRowMatrix::multiply(std::span<const double> x) const {
    Vector out(rows_);
    multiply(x, out);
    return out;
}

void SparseRowMatrix::residual(std::span<const double> b, std::span<const double> x,
                               std::span<double> out) const {
    if (b.size() != rows_ || x.size() != cols_ || out.size() != rows_)
        throw ShapeError("residual: shape mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            s += values_[k] * x[col_indices_[k]];
        out[i] = b[i] - s;
    }
}

Vector SparseRowMatrix::residual(std::span<const double> b, std::span<const double> x) const {
    Vector out(rows_);
    residual(b, x, out);
    return out;
}

std::vector<Triplet> SparseRowMatrix::to_triplets() const {
    std::vector<Triplet> out;
    out.reserve(values_.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            out.push_back({i, col_indices_[k], values_[k]});
    return out;
}

std::pair<SparseRowMatrix, Vector> normalize_rows(const SparseRowMatrix& a,
                                                  std::span<const double> b) {
    if (b.size() != a.rows())
        throw ShapeError("normalize_rows: rhs length != rows");
    std::vector<Triplet> entries = a.to_triplets();
    Vector scaled_b(b.begin(), b.end());
    std::vector<double> inv_norm(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        inv_norm[i] = 1.0 / std::sqrt(a.row_norm_sq(i));
    for (Triplet& t : entries) t.value *= inv_norm[t.row];
    for (std::size_t i = 0; i < a.rows(); ++i) scaled_b[i] *= inv_norm[i];
    return {SparseRowMatrix::from_triplets(a.rows(), a.cols(), std::move(entries)),
            std::move(scaled_b)};
}

double rre(const SparseRowMatrix& a, std::span<const double> b, std::span<const double> x) {
    const Vector r = a.residual(b, x);
    const double num = vec::norm_sq(r);
    const double den = vec::norm_sq(b);
    if (den == 0.0) {
        if (num == 0.0) return 0.0;
        throw std::domain_error("rre undefined: zero rhs with nonzero residual");
    }
    return num / den;
}

}  // namespace kaczmarz
