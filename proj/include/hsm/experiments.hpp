#pragma once

// Desk-scale reproductions of the structural theorems: the linear growth
// bound scan, the proper-generator combination, and the finite-level R/S
// splitting.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hsm/definiteness.hpp"
#include "hsm/free_group.hpp"
#include "hsm/kernel.hpp"
#include "hsm/qtransform.hpp"
#include "hsm/schur_norm.hpp"
#include "hsm/toeplitz.hpp"

namespace hsm {

// ---------------------------------------------------------------------------
// Linear growth bound.

struct ScanReport {
    std::string profile_id;
    std::vector<double> t_values;
    std::vector<OmegaNormCertificate> certificates;
    bool consistent = false;
    std::optional<double> violating_t;
    double max_excess = 0.0;
    // Fitted when consistent: phi(k) <= b + a k on the window.
    std::optional<double> fitted_a;
    std::optional<double> fitted_b;
    int truncation_used = 0;
};

/// Scan the semigroup norms over the grid and, when no certified excess is
/// found, fit the smallest slope a (max difference quotient) and then the
/// smallest offset b with phi(k) <= b + a k on k <= window.
inline ScanReport linear_bound_scan(const RadialProfile& profile, const GroupChoice& group,
                                    const std::vector<double>& t_grid,
                                    const std::vector<int>& n_ladder, int window,
                                    double tol = 1e-6) {
    HankelKernel lifted = lift_radial(profile);
    ScanReport rep;
    for (int n : n_ladder) {
        SMembershipEvidence ev =
            group.infinite ? s_membership(lifted, t_grid, n, tol)
                           : q_s_membership(lifted, group.q(), t_grid, n, tol);
        rep.t_values = ev.t_values;
        rep.certificates = ev.certificates;
        rep.consistent = ev.consistent;
        rep.violating_t = ev.violating_t;
        rep.max_excess = ev.max_excess;
        rep.truncation_used = n;
        if (!ev.consistent) break;  // a certified violation never un-certifies
    }
    if (rep.consistent) {
        double a = 0.0;
        for (int k1 = 0; k1 < window; ++k1)
            for (int k2 = k1 + 1; k2 <= window; ++k2)
                a = std::max(a, (profile.eval(k2) - profile.eval(k1)) / (k2 - k1));
        double b = 0.0;
        for (int k = 0; k <= window; ++k) b = std::max(b, profile.eval(k) - a * k);
        rep.fitted_a = a;
        rep.fitted_b = b;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Proper generator combination.

struct WHSchedule {
    std::function<double(int)> alpha;  // increasing, unbounded
    std::function<double(int)> eps;    // decreasing to zero, sum alpha*eps < inf
    int terms = 30;

    static WHSchedule standard(int terms = 30) {
        WHSchedule s;
        s.alpha = [](int n) { return static_cast<double>(n); };
        s.eps = [](int n) { return 1.0 / (static_cast<double>(n) * n * n); };
        s.terms = terms;
        return s;
    }
};

struct WHCombined {
    std::vector<double> phi;             // combined generator over the window
    std::vector<int> selected_indices;   // which family member served term n
    std::vector<std::size_t> sublevel_sizes;  // |{g : phi(g) <= R}| for R = alpha_n / 2
};

/// phi(g) = sum_n alpha_n (1 - phi_{m_n}(g)^2) over an enumerated window,
/// with phi_{m_n} selected so the max error on the first n points is <= eps_n.
/// Family members must be declared with sup norm bound <= 1.
inline WHCombined wh_combine(const std::vector<std::function<double(std::size_t)>>& family,
                             const std::vector<double>& declared_bounds,
                             std::size_t window_size, const WHSchedule& schedule) {
    if (family.size() != declared_bounds.size())
        throw Error("wh_combine: family and declared bounds size mismatch");
    for (std::size_t i = 0; i < declared_bounds.size(); ++i)
        if (declared_bounds[i] > 1.0 + 1e-12)
            throw Error("wh_combine: declared multiplier bound exceeds 1 at member " +
                        std::to_string(i));

    WHCombined out;
    out.phi.assign(window_size, 0.0);
    for (int n = 1; n <= schedule.terms; ++n) {
        double eps = schedule.eps(n);
        std::size_t points = std::min<std::size_t>(static_cast<std::size_t>(n), window_size);
        int chosen = -1;
        for (std::size_t m = 0; m < family.size(); ++m) {
            double err = 0.0;
            for (std::size_t i = 0; i < points; ++i)
                err = std::max(err, std::abs(1.0 - family[m](i)));
            if (err <= eps) {
                chosen = static_cast<int>(m);
                break;
            }
        }
        if (chosen < 0)
            throw Error("wh_combine: no family member meets the eps-selection rule at n=" +
                        std::to_string(n));
        out.selected_indices.push_back(chosen);
        double alpha = schedule.alpha(n);
        for (std::size_t g = 0; g < window_size; ++g) {
            double v = family[static_cast<size_t>(chosen)](g);
            out.phi[g] += alpha * (1.0 - v * v);
        }
    }
    // Properness diagnostics: sublevel-set sizes at R = alpha_n / 2.
    for (int n = 1; n <= schedule.terms; ++n) {
        double R = schedule.alpha(n) / 2.0;
        std::size_t count = 0;
        for (double v : out.phi)
            if (v <= R) ++count;
        out.sublevel_sizes.push_back(count);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-level R/S extraction.

struct RSExtraction {
    Eigen::MatrixXd R;  // row x = R(x)
    Eigen::MatrixXd S;
    double residual = 0.0;         // vs the target phi(y^{-1}x)
    double linearization_gap = 0.0;  // |n(1 - e^{-phi/n}) - phi| part of it
};

/// Finite-level maps R, S with phi(y^{-1}x) ~ ||R(x)-R(y)||^2 + ||S(x)+S(y)||^2.
/// phi_matrix(x,y) = phi(y^{-1}x) on a ball. The residual is reported, not
/// bounded a priori.
inline RSExtraction extract_rs(const Eigen::MatrixXd& phi_matrix, int level, double tol = 1e-9) {
    if (level < 1) throw Error("extract_rs: level must be >= 1");
    Eigen::Index n = phi_matrix.rows();
    double nn = static_cast<double>(level);
    Eigen::MatrixXd e = (-phi_matrix / nn).array().exp();

    auto feas = gilbert_feasible(e.cast<cplx>(), 1.0, 1e-9, 40000);
    if (feas.status != Feasibility::Feasible)
        throw Error("extract_rs: phi not a contractive semigroup at scale 1/n");
    const GilbertWitness& w = *feas.witness;

    // Assemble the doubled kernel with the diagonal lifted to exactly 1.
    Eigen::MatrixXd k(2 * n, 2 * n);
    k.topLeftCorner(n, n) = w.b.real();
    k.bottomRightCorner(n, n) = w.c.real();
    k.block(0, n, n, n) = e;
    k.block(n, 0, n, n) = e.transpose();
    for (Eigen::Index i = 0; i < 2 * n; ++i) k(i, i) = 1.0;

    Eigen::MatrixXd cnd = nn * (Eigen::MatrixXd::Ones(2 * n, 2 * n) - k);
    // Dykstra leaves an O(residual) eigenvalue defect; absorb it in the
    // embedding tolerance.
    double embed_tol = std::max(tol, 2.0 * nn * (feas.residual + 1e-12) * 2 * n);
    Eigen::MatrixXd T = cnd_embed(Kernel::from_real(cnd, true), embed_tol);

    // Normalize so T(e-bar) = 0, the copy of the identity in the second
    // block (index n).
    Eigen::RowVectorXd shift = T.row(n);
    T.rowwise() -= shift;

    RSExtraction out;
    Eigen::MatrixXd P = T.topRows(n);
    Eigen::MatrixXd Q = T.bottomRows(n);
    out.R = 0.5 * (P + Q);
    out.S = 0.5 * (P - Q);
    for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = 0; y < n; ++y) {
            double v = (out.R.row(x) - out.R.row(y)).squaredNorm() +
                       (out.S.row(x) + out.S.row(y)).squaredNorm();
            out.residual = std::max(out.residual, std::abs(v - phi_matrix(x, y)));
            double lin = nn * (1.0 - std::exp(-phi_matrix(x, y) / nn));
            out.linearization_gap =
                std::max(out.linearization_gap, std::abs(lin - phi_matrix(x, y)));
        }
    return out;
}

}  // namespace hsm
