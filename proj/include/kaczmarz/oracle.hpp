#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kaczmarz/sparse.hpp"
#include "kaczmarz/types.hpp"

namespace kaczmarz {

/// Row-major dense matrix, used only for the reference computations below.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct EigenDecomposition {
    Vector eigenvalues;        // ascending
    DenseMatrix eigenvectors;  // column j pairs with eigenvalues[j]
};

/// Full spectral decomposition of a symmetric matrix by cyclic Jacobi
/// rotations. Sweeps until the off-diagonal Frobenius norm drops below
/// 1e-12 * ||M||_F. Throws on asymmetric input (1e-10 relative).
EigenDecomposition dense_sym_eig(const DenseMatrix& m);

/// Relative eigenvalue cutoff below which a Gram eigenvalue counts as zero.
/// Shared with the analysis module so "nonzero eigenvalue" means the same
/// thing everywhere.
inline constexpr double kRankCutoffRel = 1e-10;

/// Least Euclidean norm solution of a consistent system via the spectral
/// pseudoinverse of the smaller Gram matrix (A A^T when rows <= cols, else
/// A^T A). Desk scale only: min(rows, cols) <= 2000. Verifies the residual
/// post hoc and throws InconsistentSystemError when the system is not
/// consistent. Reference path for tests and acceptance runs; the iterative
/// solvers never call it.
Vector least_norm_solution(const SparseRowMatrix& a, std::span<const double> b);

}  // namespace kaczmarz
