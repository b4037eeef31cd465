#pragma once

#include "jetsol/core/number.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace jetsol {

using RationalMatrix = std::vector<std::vector<Rational>>;
using RationalVector = std::vector<Rational>;

/// Rank by fraction-free (Bareiss) elimination after scaling each row to integers.
inline std::size_t exact_rank(const RationalMatrix& a)
{
    if (a.empty()) return 0;
    std::size_t rows = a.size(), cols = a.front().size();
    std::vector<std::vector<Integer>> m(rows, std::vector<Integer>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        Integer l = 1;
        for (const auto& q : a[r]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
        for (std::size_t c = 0; c < cols; ++c) m[r][c] = a[r][c].get_num() * (l / a[r][c].get_den());
    }
    Integer prev = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < cols; ++c) {
                Integer t = m[rank][col] * m[r][c] - m[r][col] * m[rank][c];
                mpz_divexact(m[r][c].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

/// Solves a square nonsingular rational system by Gaussian elimination.
inline RationalVector exact_solve_square(RationalMatrix a, RationalVector b)
{
    std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::domain_error("singular system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

struct ExactSolution {
    bool consistent = false;
    RationalVector x;
    std::size_t rank = 0;            // rank of A
    std::size_t augmented_rank = 0;  // rank of [A | b]
};

/// Minimum-norm solution of A x = b over the rationals, x = A_Rᵀ (A_R A_Rᵀ)⁻¹ b_R,
/// with R a maximal set of independent rows found in row order.
inline ExactSolution exact_least_norm(const RationalMatrix& a, const RationalVector& b, std::size_t cols)
{
    ExactSolution out;
    std::vector<std::size_t> independent;
    std::vector<std::pair<std::vector<Rational>, std::size_t>> basis;  // reduced row (with rhs), pivot column
    for (std::size_t r = 0; r < a.size(); ++r) {
        std::vector<Rational> row = a[r];
        row.push_back(b[r]);
        for (const auto& [brow, pc] : basis) {
            if (row[pc] == 0) continue;
            Rational f = row[pc] / brow[pc];
            for (std::size_t c = 0; c <= cols; ++c) row[c] -= f * brow[c];
        }
        std::size_t pc = 0;
        while (pc < cols && row[pc] == 0) ++pc;
        if (pc == cols) {
            if (row[cols] != 0) out.augmented_rank = 1;
            continue;
        }
        independent.push_back(r);
        basis.emplace_back(std::move(row), pc);
    }
    out.rank = independent.size();
    out.augmented_rank += out.rank;
    out.consistent = out.augmented_rank == out.rank;
    out.x.assign(cols, Rational(0));
    if (!out.consistent || independent.empty()) return out;

    std::size_t k = independent.size();
    RationalMatrix gram(k, RationalVector(k));
    RationalVector rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        rhs[i] = b[independent[i]];
        for (std::size_t j = 0; j < k; ++j) {
            Rational s = 0;
            for (std::size_t c = 0; c < cols; ++c) s += a[independent[i]][c] * a[independent[j]][c];
            gram[i][j] = s;
        }
    }
    RationalVector y = exact_solve_square(std::move(gram), std::move(rhs));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < cols; ++c) out.x[c] += a[independent[i]][c] * y[i];
    return out;
}

inline Eigen::MatrixXd to_eigen(const RationalMatrix& a, std::size_t cols)
{
    Eigen::MatrixXd m(a.size(), cols);
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = a[r][c].get_d();
    return m;
}

/// Rank with pivots below rel_tol · (largest pivot) treated as zero.
inline std::size_t float_rank(const Eigen::MatrixXd& a, double rel_tol = 1e-9)
{
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(rel_tol);
    return static_cast<std::size_t>(lu.rank());
}

struct FloatSolution {
    Eigen::VectorXd x;
    double residual = 0;  // max-norm of A x - b
    std::size_t rank = 0;
};

inline FloatSolution float_least_norm(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double rel_tol = 1e-9)
{
    FloatSolution out;
    if (a.rows() == 0 || a.cols() == 0) {
        out.x = Eigen::VectorXd::Zero(a.cols());
        out.residual = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
        return out;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    cod.setThreshold(rel_tol);
    out.x = cod.solve(b);
    out.rank = static_cast<std::size_t>(cod.rank());
    out.residual = (a * out.x - b).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace jetsol
