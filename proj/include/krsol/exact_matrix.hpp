#pragma once

// Small dense matrices over an exact field with Gaussian elimination.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace krsol {

template <class F>
using ExactMatrix = std::vector<std::vector<F>>;

template <class F>
ExactMatrix<F> exact_zero(std::size_t rows, std::size_t cols) {
    return ExactMatrix<F>(rows, std::vector<F>(cols, F(0)));
}

template <class F>
ExactMatrix<F> exact_transpose(const ExactMatrix<F>& m) {
    if (m.empty()) return {};
    ExactMatrix<F> t = exact_zero<F>(m[0].size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

template <class F>
ExactMatrix<F> exact_multiply(const ExactMatrix<F>& a, const ExactMatrix<F>& b) {
    std::size_t inner = b.size();
    std::size_t cols = inner == 0 ? 0 : b[0].size();
    ExactMatrix<F> r = exact_zero<F>(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == F(0)) continue;
            for (std::size_t j = 0; j < cols; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

/// Row-echelon reduction in place; returns the rank and the determinant sign/scale
/// accumulated in `det` when the matrix is square.
template <class F>
std::size_t exact_row_reduce(ExactMatrix<F>& m, F* det = nullptr) {
    std::size_t rows = m.size();
    std::size_t cols = rows == 0 ? 0 : m[0].size();
    std::size_t rank = 0;
    F d(1);
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col] == F(0)) ++pivot;
        if (pivot == rows) {
            d = F(0);
            continue;
        }
        if (pivot != rank) {
            std::swap(m[pivot], m[rank]);
            d = -d;
        }
        d *= m[rank][col];
        F inv = F(1) / m[rank][col];
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][col] == F(0)) continue;
            F factor = m[r][col] * inv;
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[rank][c];
        }
        ++rank;
    }
    if (rank < rows) d = F(0);
    if (det) *det = d;
    return rank;
}

template <class F>
std::size_t exact_rank(ExactMatrix<F> m) {
    return exact_row_reduce(m);
}

template <class F>
F exact_determinant(ExactMatrix<F> m) {
    if (!m.empty() && m.size() != m[0].size()) throw std::invalid_argument("determinant of non-square matrix");
    F d(1);
    exact_row_reduce(m, &d);
    return d;
}

/// Solves A x = b for square nonsingular A.
template <class F>
std::vector<F> exact_solve(const ExactMatrix<F>& a, const std::vector<F>& b) {
    std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("dimension mismatch in exact_solve");
    ExactMatrix<F> m = a;
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw std::invalid_argument("exact_solve needs a square matrix");
        m[i].push_back(b[i]);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == F(0)) ++pivot;
        if (pivot == n) throw std::domain_error("singular matrix in exact_solve");
        std::swap(m[pivot], m[col]);
        F inv = F(1) / m[col][col];
        for (std::size_t c = col; c <= n; ++c) m[col][c] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == F(0)) continue;
            F factor = m[r][col];
            for (std::size_t c = col; c <= n; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    std::vector<F> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n];
    return x;
}

}  // namespace krsol
