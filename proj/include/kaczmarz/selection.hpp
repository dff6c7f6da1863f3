#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kaczmarz/rng.hpp"
#include "kaczmarz/types.hpp"

namespace kaczmarz {

/// Result of the greedy residual-thresholding rule: the rows whose squared
/// residual entries clear rel_threshold * ||r||^2 * M(i).
struct GreedySelection {
    double rel_threshold = 0.0;
    std::vector<std::size_t> index_set;        // ascending
    double truncated_residual_sq_sum = 0.0;    // sum of r_i^2 over index_set
};

/// Index maximizing |r_i| / sqrt(M(i)); ties break to the lowest index so
/// runs are reproducible. Returns nullopt when the residual is identically
/// zero (already converged).
std::optional<std::size_t> select_max_weighted_residual(
    std::span<const double> r, std::span<const double> row_norms_sq);

/// Builds the thresholded index set. rel_threshold is half the sum of the
/// best weighted-residual ratio (relative to ||r||^2) and 1/||A||_F^2;
/// membership uses >= so the maximizing row always qualifies. Returns
/// nullopt when the residual is identically zero.
std::optional<GreedySelection> build_greedy_set(std::span<const double> r,
                                                std::span<const double> row_norms_sq,
                                                double frob_norm_sq);

/// Samples an index from sel.index_set with probability r_i^2 / (truncated
/// sum), by cumulative-sum inversion of a single uniform draw.
std::size_t sample_from_greedy_set(const GreedySelection& sel,
                                   std::span<const double> r, RngStream& rng);

/// Uniform draw over {0, ..., m-1}; throws on an empty system.
std::size_t select_first_index_uniform(std::size_t m, RngStream& rng);

/// k mod m.
std::size_t select_cyclic(std::size_t k, std::size_t m);

}  // namespace kaczmarz
