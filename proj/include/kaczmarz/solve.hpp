#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kaczmarz/sparse.hpp"
#include "kaczmarz/types.hpp"

namespace kaczmarz {

struct Problem;

enum class Method { Cyclic, Grk, Grko, Mwrk, Mwrko };

const char* method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct SolverConfig {
    Method method = Method::Grko;
    /// Stop once ||b - A x||^2 / ||b||^2 drops below omega.
    double omega = 0.5e-8;
    std::size_t max_iters = 100000;
    std::uint64_t seed = 0;
    /// Convergence is tested and history recorded every stride iterations;
    /// 0 picks 1, or 10 for systems with more than 1e6 cells.
    std::size_t history_stride = 0;
    /// Directions with squared norm at or below this fraction of M(next) are
    /// treated as degenerate and fall back to the orthogonal update.
    double degenerate_dir_rel_tol = 1e-14;
};

struct HistoryPoint {
    std::size_t iteration;
    double rre;
    std::chrono::nanoseconds elapsed;  // wall time since the solve started
};

struct SolveReport {
    Vector x;
    std::size_t iterations = 0;
    bool converged = false;
    double final_rre = 0.0;
    /// RRE samples, starting with the initial point.
    std::vector<HistoryPoint> rre_history;
    std::chrono::nanoseconds wall_time{0};
    Method method = Method::Grko;
    std::size_t degenerate_dir_events = 0;
    std::optional<std::size_t> last_row;  // row projected onto last
};

/// Emitted after each iteration when an observer is attached. The residual
/// span holds the freshly recomputed b - A x; step_norm_sq is the exact
/// squared distance between consecutive iterates.
struct StepEvent {
    std::size_t k;
    std::size_t index;
    std::optional<std::size_t> prev_index;
    bool oblique;
    bool degenerate_fallback;
    std::span<const double> x;
    std::span<const double> residual;
    double step_norm_sq;
};

using StepObserver = std::function<void(const StepEvent&)>;

/// x += (r_i / M(i)) a_i, landing on hyperplane i. Returns the squared step
/// length r_i^2 / M(i).
double orthogonal_step(const SparseRowMatrix& a, std::span<const double> r,
                       std::size_t i, std::span<double> x);

/// Scratch quantities of the two-hyperplane update.
struct ObliqueStep {
    double pair_dot = 0.0;      // <a_prev, a_next>
    double dir_norm_sq = 0.0;   // M(next) - pair_dot^2 / M(prev)
    double step_length = 0.0;   // r_next / dir_norm_sq
    bool degenerate = false;    // fell back to the orthogonal update
};

/// Moves x onto hyperplane `next` along the component of a_next orthogonal
/// to a_prev, which keeps it on hyperplane `prev` as well. Near-parallel
/// rows (dir_norm_sq <= degenerate_rel_tol * M(next)) fall back to the
/// orthogonal update; consistent selection rules never pick exact parallels,
/// so the guard only absorbs floating-point collapse.
ObliqueStep oblique_step(const SparseRowMatrix& a, std::span<const double> r,
                         std::size_t prev, std::size_t next, std::span<double> x,
                         double degenerate_rel_tol = 1e-14);

/// The direction the oblique update moves along, materialized for callers
/// that want to inspect it; the solve loop applies the update in place.
Vector oblique_direction(const SparseRowMatrix& a, std::size_t prev, std::size_t next);

/// Runs the configured method from x = 0 until the residual criterion or the
/// iteration cap. The matrix must be consistent for the convergence
/// guarantees to apply; an inconsistent system simply fails to converge.
SolveReport solve(const SparseRowMatrix& a, const Vector& b, const SolverConfig& cfg,
                  const StepObserver& observer = {});

SolveReport solve(const Problem& p, const SolverConfig& cfg,
                  const StepObserver& observer = {});

}  // namespace kaczmarz
