#pragma once

// The q-parameterized calculus translating between radial analysis on
// infinitely and finitely generated free groups: the geometric tau-series F,
// the diagonal recursion G, their inverses, and the q-analogues of the
// Toeplitz condition checks. tau is nilpotent on fixed sections, so F and G
// are exact there.

#include <vector>

#include <Eigen/Dense>

#include "hsm/definiteness.hpp"
#include "hsm/kernel.hpp"
#include "hsm/toeplitz.hpp"

namespace hsm {

inline void require_q(int q) {
    if (q < 2) throw Error("q must be >= 2");
}

// ---------------------------------------------------------------------------
// F = (1 - 1/q) sum_n tau^n / q^n and its inverse.

inline Eigen::MatrixXcd F_apply(const Eigen::MatrixXcd& k, int q) {
    require_q(q);
    Eigen::Index n = k.rows();
    Eigen::MatrixXcd acc = k;
    Eigen::MatrixXcd out = k;
    for (Eigen::Index step = 1; step < n; ++step) {
        acc = tau_section(acc) / static_cast<double>(q);
        out += acc;
    }
    return (1.0 - 1.0 / q) * out;
}

inline Eigen::MatrixXcd F_inv(const Eigen::MatrixXcd& k, int q) {
    require_q(q);
    return (k - tau_section(k) / static_cast<double>(q)) / (1.0 - 1.0 / q);
}

inline Kernel F_apply(const Kernel& k, int q) { return Kernel(F_apply(k.entries, q), k.hermitian); }
inline Kernel F_inv(const Kernel& k, int q) { return Kernel(F_inv(k.entries, q), k.hermitian); }

// ---------------------------------------------------------------------------
// G: Gphi(m,n) = phi(m,n) on the border, else
// (1-1/q) phi(m,n) + Gphi(m-1,n-1)/q.

inline Eigen::MatrixXcd G_apply(const Eigen::MatrixXcd& k, int q) {
    require_q(q);
    Eigen::Index n = k.rows();
    Eigen::MatrixXcd out(n, n);
    double w = 1.0 - 1.0 / q;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == 0 || j == 0)
                out(i, j) = k(i, j);
            else
                out(i, j) = w * k(i, j) + out(i - 1, j - 1) / static_cast<double>(q);
        }
    return out;
}

inline Eigen::MatrixXcd G_inv(const Eigen::MatrixXcd& k, int q) {
    require_q(q);
    Eigen::Index n = k.rows();
    Eigen::MatrixXcd out(n, n);
    double w = 1.0 / (1.0 - 1.0 / q);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == 0 || j == 0)
                out(i, j) = k(i, j);
            else
                out(i, j) = w * (k(i, j) - k(i - 1, j - 1) / static_cast<double>(q));
        }
    return out;
}

inline Kernel G_apply(const Kernel& k, int q) { return Kernel(G_apply(k.entries, q), k.hermitian); }
inline Kernel G_inv(const Kernel& k, int q) { return Kernel(G_inv(k.entries, q), k.hermitian); }

/// Residual of the intertwining identity (1 - tau*) o G = F o (1 - tau*),
/// i.e. Gk - Gk o sigma = F(k - k o sigma), on the common (N-1)-section.
inline double fg_identity_residual(const Eigen::MatrixXcd& k, int q) {
    Eigen::Index n = k.rows();
    if (n < 2) return 0.0;
    Eigen::MatrixXcd gk = G_apply(k, q);
    Eigen::MatrixXcd lhs = gk.topLeftCorner(n - 1, n - 1) - sigma_section(gk);
    Eigen::MatrixXcd h = k.topLeftCorner(n - 1, n - 1) - sigma_section(k);
    Eigen::MatrixXcd rhs = F_apply(h, q);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// chi norms.

namespace detail {

/// Extra rows/columns so the tau-series mass escaping an N-section is below
/// eps in trace norm: (tau^n / q^n) pushes content n steps; q^{-K} decay.
inline int f_embed_margin(int q, double scale, double eps = 1e-13) {
    double need = (std::log(std::max(scale, 1e-300)) - std::log(eps)) / std::log(double(q));
    return std::max(8, static_cast<int>(std::ceil(need)) + 2);
}

}  // namespace detail

/// ||chi_phi|| = ||F h||_1 + |c+| + |c-|. The F image of the N-section of h
/// is captured exactly by embedding into a larger zero-padded section before
/// the nuclear norm.
inline OmegaNormCertificate chi_norm(const HankelKernel& phi, int q, int truncation) {
    require_q(q);
    auto consts = diagonal_limit_phi0(phi);
    HankelKernel h = hankel_h(phi);
    Eigen::MatrixXd hs = h.section(truncation);
    int pad = 2 * truncation;  // tau^n h_N vanishes beyond index 2N-1
    Eigen::MatrixXd embedded = Eigen::MatrixXd::Zero(pad, pad);
    embedded.topLeftCorner(truncation, truncation) = hs;
    Eigen::MatrixXcd fh = F_apply(embedded.cast<cplx>(), q);
    OmegaNormCertificate cert;
    cert.hankel_trace_norm = nuclear_norm_selfadjoint(fh.real());
    cert.tail_bound = hankel_tail_bound(h.tail, truncation);  // ||F||_{1->1} <= 1
    cert.constants_present = true;
    cert.c_plus = consts.c_plus;
    cert.c_minus = consts.c_minus;
    cert.total = cert.hankel_trace_norm + std::abs(consts.c_plus) + std::abs(consts.c_minus);
    cert.truncation = truncation;
    return cert;
}

/// chi norm of a finitely supported kernel (zero-extended), phi_0 = 0.
inline OmegaNormCertificate chi_norm(const Kernel& phi, int q) {
    require_q(q);
    Kernel h = hankel_h(phi);
    int n = h.size();
    double scale = std::max(1.0, h.entries.cwiseAbs().maxCoeff() * n);
    int pad = n + detail::f_embed_margin(q, scale);
    Eigen::MatrixXcd embedded = Eigen::MatrixXcd::Zero(pad, pad);
    embedded.topLeftCorner(n, n) = h.entries;
    Eigen::MatrixXcd fh = F_apply(embedded, q);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(fh);
    OmegaNormCertificate cert;
    cert.hankel_trace_norm = svd.singularValues().sum();
    cert.tail_bound = 0.0;
    cert.constants_present = false;
    cert.total = cert.hankel_trace_norm;
    cert.truncation = phi.size();
    return cert;
}

/// omega norm of G(phi) for a finitely supported phi: G phi decays
/// geometrically along diagonals, so a padded section captures it.
inline OmegaNormCertificate omega_norm_of_G(const Kernel& phi, int q) {
    require_q(q);
    int n = phi.size();
    double scale = std::max(1.0, phi.entries.cwiseAbs().maxCoeff() * n);
    int pad = n + detail::f_embed_margin(q, scale);
    Eigen::MatrixXcd embedded = Eigen::MatrixXcd::Zero(pad, pad);
    embedded.topLeftCorner(n, n) = phi.entries;
    Eigen::MatrixXcd g = G_apply(embedded, q);
    Eigen::MatrixXcd h = g.topLeftCorner(pad - 1, pad - 1) - sigma_section(g);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
    OmegaNormCertificate cert;
    cert.hankel_trace_norm = svd.singularValues().sum();
    cert.tail_bound = 0.0;
    cert.constants_present = false;
    cert.total = cert.hankel_trace_norm;
    cert.truncation = phi.size();
    return cert;
}

// ---------------------------------------------------------------------------
// q condition checks.

/// PD(F(phi - phi o sigma)), PD(G phi), phi(0,0) = 1.
inline ConditionReport q_state_conditions(const Kernel& phi_section, int q, double tol) {
    require_q(q);
    const Kernel& k = phi_section;
    ConditionReport rep;
    Eigen::MatrixXcd h =
        k.entries.topLeftCorner(k.size() - 1, k.size() - 1) - sigma_section(k.entries);
    auto pd1 = is_positive_definite(Kernel(F_apply(h, q), k.hermitian), tol);
    detail::push(rep, "F(phi - phi o sigma) positive definite", pd1.verdict,
                 pd1.extremal_eigenvalue);
    auto pd2 = is_positive_definite(G_apply(k, q), tol);
    detail::push(rep, "G phi positive definite", pd2.verdict, pd2.extremal_eigenvalue);
    bool unit = std::abs(k(0, 0) - cplx(1.0, 0.0)) <= tol;
    detail::push(rep, "phi(0,0) = 1", unit, std::abs(k(0, 0) - cplx(1.0, 0.0)));
    return rep;
}

inline ConditionReport q_state_conditions(const HankelKernel& phi, int q, int truncation,
                                          double tol) {
    return q_state_conditions(phi.section_kernel(truncation + 1), q, tol);
}

/// CND(G psi), PD(F(psi o sigma - psi)), psi(0,0) = 0.
inline ConditionReport q_generator_conditions(const Kernel& psi_section, int q, double tol) {
    require_q(q);
    const Kernel& k = psi_section;
    ConditionReport rep;
    auto cnd = is_cond_negative_definite(G_apply(k, q), tol);
    detail::push(rep, "G psi conditionally negative definite", cnd.verdict,
                 cnd.extremal_eigenvalue);
    Eigen::MatrixXcd h =
        sigma_section(k.entries) - k.entries.topLeftCorner(k.size() - 1, k.size() - 1);
    auto pd = is_positive_definite(Kernel(F_apply(h, q), k.hermitian), tol);
    detail::push(rep, "F(psi o sigma - psi) positive definite", pd.verdict,
                 pd.extremal_eigenvalue);
    bool zero = std::abs(k(0, 0)) <= tol;
    detail::push(rep, "psi(0,0) = 0", zero, std::abs(k(0, 0)));
    return rep;
}

inline ConditionReport q_generator_conditions(const HankelKernel& psi, int q, int truncation,
                                              double tol) {
    return q_generator_conditions(psi.section_kernel(truncation + 1), q, tol);
}

/// q-analogue of the S-membership scan: chi norms of e^{-t phi} over a grid.
inline SMembershipEvidence q_s_membership(const HankelKernel& phi, int q,
                                          const std::vector<double>& t_grid, int truncation,
                                          double tol) {
    require_q(q);
    SMembershipEvidence ev;
    for (double t : t_grid) {
        auto cert = chi_norm(exp_scale(phi, t), q, truncation);
        double allowance = cert.tail_bound.value_or(0.0);
        double excess = cert.total - allowance - 1.0;
        if (excess > tol) {
            ev.consistent = false;
            if (!ev.violating_t || excess > ev.max_excess) {
                ev.violating_t = t;
                ev.max_excess = excess;
            }
        }
        ev.t_values.push_back(t);
        ev.certificates.push_back(std::move(cert));
    }
    return ev;
}

}  // namespace hsm
