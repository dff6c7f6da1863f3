#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kaczmarz/sparse.hpp"
#include "kaczmarz/types.hpp"

namespace kaczmarz {

/// A linear system to solve, optionally with the solution it was built from.
struct Problem {
    enum class Provenance { Generated, File };

    SparseRowMatrix matrix;
    Vector rhs;
    std::optional<Vector> known_solution;  // generator's x*; the iterative
                                           // methods converge to the least-norm
                                           // solution, which equals x* only at
                                           // full column rank
    Provenance provenance = Provenance::Generated;
    std::string source;  // generator parameters or file path
};

/// Dense matrix with i.i.d. entries uniform on [low, 1], stored in CSR.
/// Deterministic for a fixed seed.
SparseRowMatrix gen_uniform(std::size_t rows, std::size_t cols, double low,
                            std::uint64_t seed);

/// Draws x* with i.i.d. entries uniform on [0, 1] and sets rhs = A x*, so the
/// system is consistent by construction.
Problem make_consistent(SparseRowMatrix a, std::uint64_t seed);

/// Stored entries divided by rows * cols.
double density(const SparseRowMatrix& a);

struct MatrixMarketOptions {
    bool drop_zero_rows = false;
};

struct LoadedMatrix {
    SparseRowMatrix matrix;
    std::vector<std::size_t> kept_rows;  // original indices of surviving rows
    std::size_t dropped_rows = 0;
};

/// Reads a Matrix Market file: coordinate or array format, real or integer
/// field, general or symmetric. Symmetric storage is expanded to full;
/// duplicate coordinates are summed; pattern/complex/skew-symmetric files are
/// rejected. With drop_zero_rows, all-zero rows are removed and kept_rows
/// records the mapping so callers can filter the right-hand side the same way.
LoadedMatrix load_matrix_market(const std::string& path,
                                const MatrixMarketOptions& opts = {});

/// Writes coordinate/real/general with 1-based indices.
void save_matrix_market(const std::string& path, const SparseRowMatrix& a);

/// Sidecar vector files: plain text, one scalar per line.
Vector load_vector(const std::string& path);
void save_vector(const std::string& path, std::span<const double> v);

/// v restricted to the kept row indices (pairs with LoadedMatrix::kept_rows).
Vector select_entries(std::span<const double> v, std::span<const std::size_t> keep);

}  // namespace kaczmarz
