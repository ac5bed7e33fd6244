#pragma once

// Certification of positive definite and conditionally negative definite
// kernels on finite truncations, with Gram / squared-distance witnesses.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hsm/kernel.hpp"

namespace hsm {

struct DefinitenessReport {
    bool verdict = false;
    double extremal_eigenvalue = 0.0;
    double tolerance_used = 0.0;
    std::optional<Eigen::VectorXcd> witness_vector;  // violating coefficients when verdict is false
};

inline double default_tol(const Eigen::MatrixXcd& m) {
    double scale = m.cwiseAbs().maxCoeff();
    return 1e-9 * std::max(1.0, scale);
}

/// Smallest eigenvalue >= -tol. Witness: the bottom eigenvector when not.
inline DefinitenessReport is_positive_definite(const Kernel& k, double tol) {
    if (!k.hermitian) throw Error("is_positive_definite: kernel must be hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k.entries);
    DefinitenessReport rep;
    rep.tolerance_used = tol;
    rep.extremal_eigenvalue = es.eigenvalues().minCoeff();
    rep.verdict = rep.extremal_eigenvalue >= -tol;
    if (!rep.verdict) {
        Eigen::Index idx = 0;
        es.eigenvalues().minCoeff(&idx);
        rep.witness_vector = es.eigenvectors().col(idx);
    }
    return rep;
}

/// Compress k at base point 0: B(i,j) = k(i,j) - k(i,0) - k(0,j) + k(0,0) on
/// indices 1..N-1. k is CND iff B is negative semidefinite.
inline Eigen::MatrixXcd cnd_compression(const Kernel& k) {
    int n = k.size();
    if (n < 2) return Eigen::MatrixXcd::Zero(0, 0);
    Eigen::MatrixXcd b(n - 1, n - 1);
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            b(i - 1, j - 1) = k(i, j) - k(i, 0) - k(0, j) + k(0, 0);
    return b;
}

inline DefinitenessReport is_cond_negative_definite(const Kernel& k, double tol) {
    if (!k.hermitian) throw Error("is_cond_negative_definite: kernel must be hermitian");
    DefinitenessReport rep;
    rep.tolerance_used = tol;
    Eigen::MatrixXcd b = cnd_compression(k);
    if (b.rows() == 0) {
        rep.verdict = true;
        return rep;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b);
    rep.extremal_eigenvalue = es.eigenvalues().maxCoeff();
    rep.verdict = rep.extremal_eigenvalue <= tol;
    if (!rep.verdict) {
        // Map the compressed eigenvector back to mean-zero coefficients on 0..N-1.
        Eigen::Index idx = 0;
        es.eigenvalues().maxCoeff(&idx);
        Eigen::VectorXcd v = es.eigenvectors().col(idx);
        Eigen::VectorXcd c(k.size());
        c(0) = -v.sum();
        c.tail(k.size() - 1) = v;
        rep.witness_vector = c;
    }
    return rep;
}

/// Gram factorization k(i,j) = <a(i), a(j)>; row i of the returned matrix is
/// a(i). Eigenvalues in [-tol, 0) are clamped to zero; below -tol is an error.
inline Eigen::MatrixXcd gram_factorize(const Kernel& k, double tol) {
    if (!k.hermitian) throw Error("gram_factorize: kernel must be hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k.entries);
    if (es.eigenvalues().minCoeff() < -tol)
        throw Error("gram_factorize: kernel has eigenvalue below -tol");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

/// Real CND kernel with zero diagonal as squared distances: returns vectors
/// a(i) (rows) with ||a(i)-a(j)||^2 = k(i,j) and a(0) = 0.
inline Eigen::MatrixXd cnd_embed(const Kernel& k, double tol) {
    if (!k.real) throw Error("cnd_embed: kernel must be real");
    int n = k.size();
    for (int i = 0; i < n; ++i)
        if (std::abs(k(i, i)) > tol) throw Error("cnd_embed: diagonal must vanish");
    auto rep = is_cond_negative_definite(k, tol);
    if (!rep.verdict) throw Error("cnd_embed: kernel is not conditionally negative definite");
    if (n == 1) return Eigen::MatrixXd::Zero(1, 1);
    // -1/2 B is PSD; its Gram vectors give a(i) for i >= 1, a(0) = 0.
    Eigen::MatrixXd b = (-0.5 * cnd_compression(k)).real();
    Kernel half(b.cast<cplx>(), true);
    Eigen::MatrixXd g = gram_factorize(half, tol).real();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, g.cols());
    a.bottomRows(n - 1) = g;
    return a;
}

struct SchoenbergReport {
    std::vector<double> t_values;
    std::vector<bool> pd_at_t;
    bool cnd_verdict = false;
    bool all_pd = false;
};

/// Schoenberg cross-check: e^{-t k} PD for each t on the grid, against the
/// direct CND test on the same section.
inline SchoenbergReport schoenberg_check(const Kernel& k, const std::vector<double>& t_grid,
                                         double tol) {
    if (!k.hermitian) throw Error("schoenberg_check: kernel must be hermitian");
    SchoenbergReport rep;
    rep.t_values = t_grid;
    rep.all_pd = true;
    for (double t : t_grid) {
        bool pd = is_positive_definite(exp_scale(k, t), tol).verdict;
        rep.pd_at_t.push_back(pd);
        rep.all_pd = rep.all_pd && pd;
    }
    rep.cnd_verdict = is_cond_negative_definite(k, tol).verdict;
    return rep;
}

struct EtaVectors {
    Eigen::MatrixXcd eta;                     // row m = eta_m
    std::vector<double> difference_partials;  // partial sums of ||eta_k - eta_{k+1}||^2
};

/// Vectors with <eta_m, eta_n> = (psi o sigma - psi)(m,n) on the truncation,
/// plus the monotone diagnostic sum of consecutive differences.
inline EtaVectors cnd_eta_vectors(const Kernel& psi, double tol) {
    Kernel diff(shift_sigma(psi).entries - psi.entries.topLeftCorner(psi.size() - 1, psi.size() - 1),
                psi.hermitian);
    auto rep = is_positive_definite(diff, tol);
    if (!rep.verdict) throw Error("cnd_eta_vectors: psi o sigma - psi is not positive definite");
    EtaVectors out;
    out.eta = gram_factorize(diff, tol);
    double acc = 0.0;
    for (int k = 0; k + 1 < out.eta.rows(); ++k) {
        acc += (out.eta.row(k) - out.eta.row(k + 1)).squaredNorm();
        out.difference_partials.push_back(acc);
    }
    return out;
}

inline EtaVectors cnd_eta_vectors(const HankelKernel& psi, int truncation, double tol) {
    return cnd_eta_vectors(psi.section_kernel(truncation + 1), tol);
}

}  // namespace hsm
