#include "kaczmarz/selection.hpp"

#include <stdexcept>

namespace kaczmarz {

std::optional<std::size_t> select_max_weighted_residual(
    std::span<const double> r, std::span<const double> row_norms_sq) {
    if (r.size() != row_norms_sq.size())
        throw ShapeError("select_max_weighted_residual: length mismatch");
    std::optional<std::size_t> best;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double ratio = r[i] * r[i] / row_norms_sq[i];
        if (ratio > best_ratio) {  // strict: ties keep the lowest index
            best_ratio = ratio;
            best = i;
        }
    }
    return best;  // nullopt iff every residual entry is zero
}

std::optional<GreedySelection> build_greedy_set(std::span<const double> r,
                                                std::span<const double> row_norms_sq,
                                                double frob_norm_sq) {
    if (r.size() != row_norms_sq.size())
        throw ShapeError("build_greedy_set: length mismatch");
    double residual_sq = 0.0;
    for (double v : r) residual_sq += v * v;
    if (residual_sq == 0.0) return std::nullopt;

    std::size_t argmax = 0;
    double max_ratio = -1.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double ratio = r[i] * r[i] / row_norms_sq[i];
        if (ratio > max_ratio) {
            max_ratio = ratio;
            argmax = i;
        }
    }

    GreedySelection sel;
    sel.rel_threshold = 0.5 * (max_ratio / residual_sq + 1.0 / frob_norm_sq);
    const double bar = sel.rel_threshold * residual_sq;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] * r[i] >= bar * row_norms_sq[i]) {
            sel.index_set.push_back(i);
            sel.truncated_residual_sq_sum += r[i] * r[i];
        }
    }
    // Rounding can push the maximizing row a hair under its own threshold;
    // it belongs to the set by construction, so force it in.
    if (sel.index_set.empty()) {
        sel.index_set.push_back(argmax);
        sel.truncated_residual_sq_sum = r[argmax] * r[argmax];
    }
    return sel;
}

std::size_t sample_from_greedy_set(const GreedySelection& sel,
                                   std::span<const double> r, RngStream& rng) {
    if (sel.index_set.empty())
        throw std::logic_error("sample_from_greedy_set: empty index set");
    const double u = rng.uniform01() * sel.truncated_residual_sq_sum;
    double cum = 0.0;
    for (std::size_t i : sel.index_set) {
        cum += r[i] * r[i];
        if (u < cum) return i;
    }
    return sel.index_set.back();
}

std::size_t select_first_index_uniform(std::size_t m, RngStream& rng) {
    if (m == 0)
        throw std::invalid_argument("select_first_index_uniform: empty system");
    return rng.uniform_index(m);
}

std::size_t select_cyclic(std::size_t k, std::size_t m) {
    if (m == 0)
        throw std::invalid_argument("select_cyclic: empty system");
    return k % m;
}

}  // namespace kaczmarz
