#include "kaczmarz/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kaczmarz {
namespace {

double frob_norm(const DenseMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

double off_diag_frob(const DenseMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) s += m.at(i, j) * m.at(i, j);
    return std::sqrt(s);
}

// One Jacobi rotation zeroing B[p][q], accumulated into V.
void rotate(DenseMatrix& b, DenseMatrix& v, std::size_t p, std::size_t q) {
    const double bpq = b.at(p, q);
    if (bpq == 0.0) return;
    const double theta = (b.at(q, q) - b.at(p, p)) / (2.0 * bpq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const std::size_t n = b.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const double bkp = b.at(k, p);
        const double bkq = b.at(k, q);
        b.at(k, p) = c * bkp - s * bkq;
        b.at(k, q) = s * bkp + c * bkq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double bpk = b.at(p, k);
        const double bqk = b.at(q, k);
        b.at(p, k) = c * bpk - s * bqk;
        b.at(q, k) = s * bpk + c * bqk;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double vkp = v.at(k, p);
        const double vkq = v.at(k, q);
        v.at(k, p) = c * vkp - s * vkq;
        v.at(k, q) = s * vkp + c * vkq;
    }
}

// Gram matrix A^T A (cols x cols).
DenseMatrix gram_cols(const SparseRowMatrix& a) {
    DenseMatrix g(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto idx = a.row_indices(i);
        const auto val = a.row_values(i);
        for (std::size_t p = 0; p < idx.size(); ++p)
            for (std::size_t q = 0; q < idx.size(); ++q)
                g.at(idx[p], idx[q]) += val[p] * val[q];
    }
    return g;
}

// Gram matrix A A^T (rows x rows).
DenseMatrix gram_rows(const SparseRowMatrix& a) {
    DenseMatrix g(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        g.at(i, i) = a.row_norm_sq(i);
        for (std::size_t j = i + 1; j < a.rows(); ++j) {
            const double d = a.row_pair_dot(i, j);
            g.at(i, j) = d;
            g.at(j, i) = d;
        }
    }
    return g;
}

}  // namespace

EigenDecomposition dense_sym_eig(const DenseMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("dense_sym_eig: matrix not square");
    const std::size_t n = m.rows();
    const double scale = frob_norm(m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m.at(i, j) - m.at(j, i)) > 1e-10 * std::max(scale, 1e-300))
                throw std::invalid_argument("dense_sym_eig: matrix not symmetric");

    DenseMatrix b = m;
    DenseMatrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    const double target = 1e-12 * scale;
    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    while (off_diag_frob(b) > target) {
        if (++sweep > kMaxSweeps)
            throw std::runtime_error("dense_sym_eig: Jacobi sweeps did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(b, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return b.at(x, x) < b.at(y, y); });

    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        dec.eigenvalues[j] = b.at(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i)
            dec.eigenvectors.at(i, j) = v.at(i, order[j]);
    }
    return dec;
}

Vector least_norm_solution(const SparseRowMatrix& a, std::span<const double> b) {
    if (b.size() != a.rows())
        throw ShapeError("least_norm_solution: rhs length != rows");
    if (std::min(a.rows(), a.cols()) > 2000)
        throw std::invalid_argument("least_norm_solution: beyond desk scale");

    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Vector x(n, 0.0);

    if (m <= n) {
        // x = A^T (A A^T)^+ b
        const EigenDecomposition dec = dense_sym_eig(gram_rows(a));
        const double cutoff = kRankCutoffRel * std::max(dec.eigenvalues.back(), 0.0);
        Vector y(m, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            const double lambda = dec.eigenvalues[j];
            if (lambda <= cutoff) continue;
            double proj = 0.0;
            for (std::size_t i = 0; i < m; ++i) proj += dec.eigenvectors.at(i, j) * b[i];
            proj /= lambda;
            for (std::size_t i = 0; i < m; ++i) y[i] += proj * dec.eigenvectors.at(i, j);
        }
        for (std::size_t i = 0; i < m; ++i) {
            const auto idx = a.row_indices(i);
            const auto val = a.row_values(i);
            for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] += y[i] * val[k];
        }
    } else {
        // x = (A^T A)^+ A^T b
        const EigenDecomposition dec = dense_sym_eig(gram_cols(a));
        const double cutoff = kRankCutoffRel * std::max(dec.eigenvalues.back(), 0.0);
        Vector atb(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const auto idx = a.row_indices(i);
            const auto val = a.row_values(i);
            for (std::size_t k = 0; k < idx.size(); ++k) atb[idx[k]] += b[i] * val[k];
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double lambda = dec.eigenvalues[j];
            if (lambda <= cutoff) continue;
            double proj = 0.0;
            for (std::size_t i = 0; i < n; ++i) proj += dec.eigenvectors.at(i, j) * atb[i];
            proj /= lambda;
            for (std::size_t i = 0; i < n; ++i) x[i] += proj * dec.eigenvectors.at(i, j);
        }
    }

    const Vector res = a.residual(b, x);
    const double res_norm = vec::norm(res);
    if (res_norm > 1e-8 * std::max(vec::norm(b), 1e-300))
        throw InconsistentSystemError(
            res_norm, "least_norm_solution: system inconsistent, residual norm " +
                          std::to_string(res_norm));
    return x;
}

}  // namespace kaczmarz
