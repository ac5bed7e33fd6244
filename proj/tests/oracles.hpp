#pragma once

// Independent reference computations used to check the main algorithms.

#include <Eigen/Dense>

#include "hsm/kernel.hpp"

namespace oracle {

/// Brute-force Schur multiplier norm of a real 2x2 matrix: bisection on C
/// with feasibility decided by a dense grid search (with local refinement)
/// over the free off-diagonal entries x, y of the unit-diagonal blocks b, c
/// in [[b, a/C], [a/C^T, c]], accepting when the assembled 4x4 matrix is PSD.
inline double schur_norm_2x2(const Eigen::Matrix2d& a, double tol = 1e-6) {
    auto min_eig = [&](double C, double x, double y) {
        Eigen::Matrix4d m;
        m << 1, x, a(0, 0) / C, a(0, 1) / C,
             x, 1, a(1, 0) / C, a(1, 1) / C,
             a(0, 0) / C, a(1, 0) / C, 1, y,
             a(0, 1) / C, a(1, 1) / C, y, 1;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    };
    auto feasible = [&](double C) {
        double best = -1.0, bx = 0.0, by = 0.0;
        for (int i = -50; i <= 50; ++i)
            for (int j = -50; j <= 50; ++j) {
                double e = min_eig(C, i / 50.0, j / 50.0);
                if (e > best) {
                    best = e;
                    bx = i / 50.0;
                    by = j / 50.0;
                }
            }
        for (double step = 0.02; step > 1e-9; step *= 0.5) {
            bool moved = true;
            while (moved) {
                moved = false;
                for (double dx : {-step, 0.0, step})
                    for (double dy : {-step, 0.0, step}) {
                        double x = std::clamp(bx + dx, -1.0, 1.0);
                        double y = std::clamp(by + dy, -1.0, 1.0);
                        double e = min_eig(C, x, y);
                        if (e > best + 1e-15) {
                            best = e;
                            bx = x;
                            by = y;
                            moved = true;
                        }
                    }
            }
        }
        return best >= -1e-9;
    };
    double lo = a.cwiseAbs().maxCoeff();
    if (lo == 0.0) return 0.0;
    double hi = 2.0 * lo;
    while (!feasible(hi)) hi *= 2.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Random real symmetric matrix with entries in [-1, 1].
template <class Rng>
Eigen::MatrixXd random_symmetric(int n, Rng& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = dist(rng);
    return m;
}

/// Random Gram matrix with unit diagonal (PSD, diag exactly 1).
template <class Rng>
Eigen::MatrixXd random_unit_gram(int n, Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd v(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) v(i, j) = dist(rng);
        v.row(i).normalize();
    }
    return v * v.transpose();
}

}  // namespace oracle
