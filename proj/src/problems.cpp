#include "kaczmarz/problems.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "kaczmarz/rng.hpp"

namespace kaczmarz {

SparseRowMatrix gen_uniform(std::size_t rows, std::size_t cols, double low,
                            std::uint64_t seed) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("gen_uniform: empty dimensions");
    if (low < 0.0 || low >= 1.0)
        throw std::invalid_argument("gen_uniform: interval start must lie in [0, 1)");
    RngStream rng(seed);
    std::vector<double> entries(rows * cols);
    for (double& v : entries) v = rng.uniform(low, 1.0);
    return SparseRowMatrix::from_dense(rows, cols, entries);
}

Problem make_consistent(SparseRowMatrix a, std::uint64_t seed) {
    RngStream rng(seed);
    Vector x_star(a.cols());
    for (double& v : x_star) v = rng.uniform01();

    Problem p;
    p.rhs = a.multiply(x_star);
    p.matrix = std::move(a);
    p.known_solution = std::move(x_star);
    p.provenance = Problem::Provenance::Generated;
    p.source = "consistent(seed=" + std::to_string(seed) + ")";

    const Vector res = p.matrix.residual(p.rhs, *p.known_solution);
    if (vec::norm(res) > 1e-10 * std::max(vec::norm(p.rhs), 1e-300))
        throw std::logic_error("make_consistent: construction residual too large");
    return p;
}

double density(const SparseRowMatrix& a) {
    return static_cast<double>(a.nnz()) /
           (static_cast<double>(a.rows()) * static_cast<double>(a.cols()));
}

Vector select_entries(std::span<const double> v, std::span<const std::size_t> keep) {
    Vector out;
    out.reserve(keep.size());
    for (std::size_t i : keep) {
        if (i >= v.size())
            throw std::out_of_range("select_entries: index out of range");
        out.push_back(v[i]);
    }
    return out;
}

}  // namespace kaczmarz
