#pragma once

// Littlewood kernels: the equal-subset-pair t2 norm (exact brute force at
// small sizes) and the constructive disjoint-support splitting from the
// inductive peel.

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "hsm/kernel.hpp"

namespace hsm {

struct LittlewoodSplit {
    Eigen::MatrixXcd b;   // column-bounded part (l1 -> l2)
    Eigen::MatrixXcd c;   // row-bounded part (l2 -> linf)
    bool supports_disjoint = false;
    double col_bound = 0.0;  // sup over columns of ||col(b)||_2
    double row_bound = 0.0;  // sup over rows of ||row(c)||_2
};

/// Exact sup over equal-size subset pairs (F1, F2) of
/// ((1/|F1|) sum_{i in F1, j in F2} |a_ij|^2)^{1/2}.
inline double t2_norm(const Eigen::MatrixXcd& a, int brute_force_cap = 8) {
    Eigen::Index n = a.rows();
    if (n != a.cols()) throw Error("t2_norm: matrix must be square");
    if (n > brute_force_cap)
        throw Error("t2_norm: size above brute-force cap; use the split-based bounds");
    Eigen::MatrixXd sq = a.cwiseAbs2();
    double best = 0.0;
    // For fixed F2, the optimal F1 of size k takes the k largest row sums
    // restricted to F2.
    for (unsigned f2 = 1; f2 < (1u << n); ++f2) {
        int k = __builtin_popcount(f2);
        Eigen::VectorXd rows = Eigen::VectorXd::Zero(n);
        for (Eigen::Index j = 0; j < n; ++j)
            if (f2 & (1u << j)) rows += sq.col(j);
        std::vector<double> r(rows.data(), rows.data() + n);
        std::sort(r.begin(), r.end(), std::greater<double>());
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += r[static_cast<size_t>(i)];
        best = std::max(best, s / k);
    }
    return std::sqrt(best);
}

namespace detail {

// Peel recursively: remove the minimal-row-sum row and minimal-column-sum
// column (ties to the lowest index), split the interior, then put the row
// into c and the column (with the corner) into b.
inline void littlewood_peel(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& b, Eigen::MatrixXcd& c,
                            std::vector<Eigen::Index> rows, std::vector<Eigen::Index> cols) {
    if (rows.empty()) return;
    if (rows.size() == 1) {
        b(rows[0], cols[0]) = a(rows[0], cols[0]);
        return;
    }
    Eigen::Index best_r = 0, best_c = 0;
    double best_rsum = -1.0, best_csum = -1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double s = 0.0;
        for (Eigen::Index j : cols) s += std::norm(a(rows[i], j));
        if (best_rsum < 0 || s < best_rsum) {
            best_rsum = s;
            best_r = static_cast<Eigen::Index>(i);
        }
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
        double s = 0.0;
        for (Eigen::Index i : rows) s += std::norm(a(i, cols[j]));
        if (best_csum < 0 || s < best_csum) {
            best_csum = s;
            best_c = static_cast<Eigen::Index>(j);
        }
    }
    Eigen::Index ri = rows[static_cast<size_t>(best_r)];
    Eigen::Index cj = cols[static_cast<size_t>(best_c)];
    // Removed row -> c, removed column (including the corner) -> b.
    for (Eigen::Index j : cols)
        if (j != cj) c(ri, j) = a(ri, j);
    for (Eigen::Index i : rows) b(i, cj) = a(i, cj);

    std::vector<Eigen::Index> sub_rows, sub_cols;
    for (Eigen::Index i : rows)
        if (i != ri) sub_rows.push_back(i);
    for (Eigen::Index j : cols)
        if (j != cj) sub_cols.push_back(j);
    littlewood_peel(a, b, c, std::move(sub_rows), std::move(sub_cols));
}

}  // namespace detail

inline LittlewoodSplit littlewood_split(const Eigen::MatrixXcd& a) {
    Eigen::Index n = a.rows();
    if (n != a.cols()) throw Error("littlewood_split: matrix must be square");
    LittlewoodSplit out;
    out.b = Eigen::MatrixXcd::Zero(n, n);
    out.c = Eigen::MatrixXcd::Zero(n, n);
    std::vector<Eigen::Index> idx(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    detail::littlewood_peel(a, out.b, out.c, idx, idx);

    out.supports_disjoint = true;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (out.b(i, j) != cplx(0, 0) && out.c(i, j) != cplx(0, 0))
                out.supports_disjoint = false;
    out.col_bound = std::sqrt(out.b.cwiseAbs2().colwise().sum().maxCoeff());
    out.row_bound = std::sqrt(out.c.cwiseAbs2().rowwise().sum().maxCoeff());
    return out;
}

/// max(col bound of b, row bound of c): an upper bound on ||a||_L.
inline double l_norm_upper(const LittlewoodSplit& split) {
    return std::max(split.col_bound, split.row_bound);
}

}  // namespace hsm
