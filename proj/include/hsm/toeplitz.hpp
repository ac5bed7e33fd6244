#pragma once

// Functionals on the Toeplitz algebra realized through their concrete data:
// the trace-class Hankel part h = phi - phi o sigma and the two-atom diagonal
// limit part. Includes the class-S condition checks and the constructive
// generator splitting.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hsm/definiteness.hpp"
#include "hsm/kernel.hpp"

namespace hsm {

// ---------------------------------------------------------------------------
// h = phi - phi o sigma.

inline HankelKernel hankel_h(const HankelKernel& phi) {
    HankelKernel h;
    auto base = phi.dot;
    h.dot = [base](long s) { return base(s) - base(s + 2); };
    const TailInfo& ti = phi.tail;
    TailInfo& to = h.tail;
    to.kind = LimitKind::Finite;
    to.even_limit = to.odd_limit = 0.0;
    if (ti.kind == LimitKind::Finite && ti.has_geometric_bound) {
        to.has_geometric_bound = true;
        to.coef = ti.coef * (1.0 + ti.ratio * ti.ratio);
        to.ratio = ti.ratio;
        to.start = ti.start;
    }
    // Otherwise no summable bound is available; trace-norm tails are unknown.
    return h;
}

/// Zero-extension convention: for a finite Kernel section, h(m,n) uses
/// phi = 0 beyond the section.
inline Kernel hankel_h(const Kernel& phi) {
    int n = phi.size();
    Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    padded.topLeftCorner(n, n) = phi.entries;
    Eigen::MatrixXcd h = phi.entries - padded.block(1, 1, n, n);
    return Kernel(std::move(h), phi.hermitian);
}

// ---------------------------------------------------------------------------
// Trace norm with tail bounds.

struct TraceNormResult {
    double value = 0.0;
    std::optional<double> tail_bound;  // nullopt = unknown
};

inline double nuclear_norm_selfadjoint(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

/// Column-norm tail bound for a Hankel matrix whose sequence obeys
/// |h-dot(s)| <= C r^s for s >= start: sum over columns j >= N of the full
/// column l2 norm, doubled to cover the symmetric row strip.
inline std::optional<double> hankel_tail_bound(const TailInfo& tail, int truncation) {
    if (!tail.has_geometric_bound) return std::nullopt;
    if (truncation < tail.start) return std::nullopt;
    double C = tail.coef, r = tail.ratio;
    if (C == 0.0) return 0.0;
    if (!(r < 1.0)) return std::nullopt;
    double col = C / std::sqrt(1.0 - r * r);          // ||col_j|| <= col * r^j
    double sum = col * std::pow(r, truncation) / (1.0 - r);
    return 2.0 * sum;
}

/// Sum of singular values of the N-section plus a tail bound from the
/// declared decay law.
inline TraceNormResult trace_norm(const HankelKernel& h, int truncation) {
    TraceNormResult out;
    out.value = nuclear_norm_selfadjoint(h.section(truncation));
    out.tail_bound = hankel_tail_bound(h.tail, truncation);
    return out;
}

inline TraceNormResult trace_norm(const Kernel& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.entries);
    TraceNormResult out;
    out.value = svd.singularValues().sum();
    out.tail_bound = 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Diagonal limits phi_0 and the omega norm.

struct DiagonalConstants {
    double c_plus = 0.0;
    double c_minus = 0.0;
};

inline DiagonalConstants diagonal_limit_phi0(const HankelKernel& phi) {
    if (!phi.tail.limits_exist())
        throw Error("diagonal_limit_phi0: not a bounded functional (divergent tail)");
    return DiagonalConstants{phi.tail.c_plus(), phi.tail.c_minus()};
}

struct OmegaNormCertificate {
    double hankel_trace_norm = 0.0;
    std::optional<double> tail_bound;
    bool constants_present = false;
    double c_plus = 0.0;
    double c_minus = 0.0;
    double total = 0.0;
    int truncation = 0;
};

/// ||omega_phi|| = ||h||_1 + |c+| + |c-| at the given truncation.
inline OmegaNormCertificate omega_norm(const HankelKernel& phi, int truncation) {
    auto consts = diagonal_limit_phi0(phi);
    auto tn = trace_norm(hankel_h(phi), truncation);
    OmegaNormCertificate cert;
    cert.hankel_trace_norm = tn.value;
    cert.tail_bound = tn.tail_bound;
    cert.constants_present = true;
    cert.c_plus = consts.c_plus;
    cert.c_minus = consts.c_minus;
    cert.total = tn.value + std::abs(consts.c_plus) + std::abs(consts.c_minus);
    cert.truncation = truncation;
    return cert;
}

/// omega norm of a finitely supported kernel (zero-extended): phi_0 = 0.
inline OmegaNormCertificate omega_norm(const Kernel& phi) {
    auto tn = trace_norm(hankel_h(phi));
    OmegaNormCertificate cert;
    cert.hankel_trace_norm = tn.value;
    cert.tail_bound = 0.0;
    cert.constants_present = false;
    cert.total = tn.value;
    cert.truncation = phi.size();
    return cert;
}

// ---------------------------------------------------------------------------
// Condition reports (state, generator, bounded part).

struct ConditionReport {
    std::vector<std::string> names;
    std::vector<bool> verdicts;
    std::vector<double> extremal_eigenvalues;
    bool all_pass() const {
        for (bool v : verdicts)
            if (!v) return false;
        return true;
    }
};

namespace detail {
inline void push(ConditionReport& rep, const std::string& name, bool verdict, double ev) {
    rep.names.push_back(name);
    rep.verdicts.push_back(verdict);
    rep.extremal_eigenvalues.push_back(ev);
}
}  // namespace detail

/// PD(phi), PD(phi - phi o sigma), phi(0,0) = 1 on the N-section.
inline ConditionReport state_conditions(const Kernel& phi_section, double tol) {
    const Kernel& k = phi_section;
    ConditionReport rep;
    auto pd = is_positive_definite(k, tol);
    detail::push(rep, "phi positive definite", pd.verdict, pd.extremal_eigenvalue);
    Kernel diff(k.entries.topLeftCorner(k.size() - 1, k.size() - 1) - shift_sigma(k).entries,
                k.hermitian);
    auto pd2 = is_positive_definite(diff, tol);
    detail::push(rep, "phi - phi o sigma positive definite", pd2.verdict, pd2.extremal_eigenvalue);
    bool unit = std::abs(k(0, 0) - cplx(1.0, 0.0)) <= tol;
    detail::push(rep, "phi(0,0) = 1", unit, std::abs(k(0, 0) - cplx(1.0, 0.0)));
    return rep;
}

inline ConditionReport state_conditions(const HankelKernel& phi, int truncation, double tol) {
    return state_conditions(phi.section_kernel(truncation + 1), tol);
}

/// CND(psi), psi(0,0) = 0, PD(psi o sigma - psi) on the N-section.
inline ConditionReport generator_conditions(const Kernel& psi_section, double tol) {
    const Kernel& k = psi_section;
    ConditionReport rep;
    auto cnd = is_cond_negative_definite(k, tol);
    detail::push(rep, "psi conditionally negative definite", cnd.verdict, cnd.extremal_eigenvalue);
    bool zero = std::abs(k(0, 0)) <= tol;
    detail::push(rep, "psi(0,0) = 0", zero, std::abs(k(0, 0)));
    Kernel diff(shift_sigma(k).entries - k.entries.topLeftCorner(k.size() - 1, k.size() - 1),
                k.hermitian);
    auto pd = is_positive_definite(diff, tol);
    detail::push(rep, "psi o sigma - psi positive definite", pd.verdict, pd.extremal_eigenvalue);
    return rep;
}

inline ConditionReport generator_conditions(const HankelKernel& psi, int truncation, double tol) {
    return generator_conditions(psi.section_kernel(truncation + 1), tol);
}

/// PD(theta - theta(0,0)/2), PD(theta - theta o sigma) on the N-section.
inline ConditionReport bounded_part_conditions(const Kernel& theta_section, double tol) {
    const Kernel& k = theta_section;
    ConditionReport rep;
    Eigen::MatrixXcd shifted =
        k.entries - 0.5 * k(0, 0) * Eigen::MatrixXcd::Ones(k.size(), k.size());
    auto pd1 = is_positive_definite(Kernel(std::move(shifted), k.hermitian), tol);
    detail::push(rep, "theta - theta(0,0)/2 positive definite", pd1.verdict,
                 pd1.extremal_eigenvalue);
    Kernel diff(k.entries.topLeftCorner(k.size() - 1, k.size() - 1) - shift_sigma(k).entries,
                k.hermitian);
    auto pd2 = is_positive_definite(diff, tol);
    detail::push(rep, "theta - theta o sigma positive definite", pd2.verdict,
                 pd2.extremal_eigenvalue);
    return rep;
}

inline ConditionReport bounded_part_conditions(const HankelKernel& theta, int truncation,
                                               double tol) {
    return bounded_part_conditions(theta.section_kernel(truncation + 1), tol);
}

// ---------------------------------------------------------------------------
// S-membership scan.

struct SMembershipEvidence {
    std::vector<double> t_values;
    std::vector<OmegaNormCertificate> certificates;
    bool consistent = true;             // all totals within the allowance
    std::optional<double> violating_t;  // set when a certified excess exists
    double max_excess = 0.0;
};

/// Evaluates ||omega_{e^{-t phi}}|| over the t-grid. "consistent" means no
/// certified excess over 1 on the tested section; it never claims the
/// infinite statement.
inline SMembershipEvidence s_membership(const HankelKernel& phi, const std::vector<double>& t_grid,
                                        int truncation, double tol) {
    SMembershipEvidence ev;
    for (double t : t_grid) {
        auto cert = omega_norm(exp_scale(phi, t), truncation);
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

// ---------------------------------------------------------------------------
// Generator splitting.

struct SplitWitness {
    Kernel psi;
    Kernel theta;
    ConditionReport psi_report;      // CND + psi(0,0)=0 + PD(psi o sigma - psi)
    ConditionReport theta_report;    // the two bounded-part conditions
    double reconstruction_error = 0.0;
    double hahn_jordan_truncation_error = 0.0;
};

namespace detail {

// Spectral positive/negative parts of a real symmetric matrix.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> jordan_parts(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd pos = es.eigenvalues().cwiseMax(0.0);
    Eigen::VectorXd neg = (-es.eigenvalues()).cwiseMax(0.0);
    Eigen::MatrixXd hp = es.eigenvectors() * pos.asDiagonal() * es.eigenvectors().transpose();
    Eigen::MatrixXd hm = es.eigenvectors() * neg.asDiagonal() * es.eigenvectors().transpose();
    return {hp, hm};
}

// phi^{+/-}(m,n) = sum_k h^{+/-}(m+k, n+k) + two-atom measure part, assembled
// on an N-section from an L x L Hahn-Jordan decomposition (L >= N).
inline Eigen::MatrixXd assemble_functional_kernel(const Eigen::MatrixXd& hpart, double atom_plus,
                                                  double atom_minus, int n_out) {
    int L = static_cast<int>(hpart.rows());
    Eigen::MatrixXd out(n_out, n_out);
    for (int m = 0; m < n_out; ++m)
        for (int n = 0; n < n_out; ++n) {
            double s = 0.0;
            int kmax = L - std::max(m, n);
            for (int k = 0; k < kmax; ++k) s += hpart(m + k, n + k);
            double sign = ((m - n) % 2 == 0) ? 1.0 : -1.0;
            out(m, n) = s + atom_plus + atom_minus * sign;
        }
    return out;
}

}  // namespace detail

/// Concrete Hahn-Jordan split of (1 - e^{-t phi})/t into psi + theta per the
/// class-S definition, with all four certificates on the N-section. The
/// working size for the trace-part sums is enlarged until the declared decay
/// law certifies the requested reconstruction accuracy.
inline SplitWitness generator_split(const HankelKernel& phi, double t, int truncation,
                                    double tol) {
    HankelKernel scaled = exp_scale(phi, t);
    auto consts = diagonal_limit_phi0(scaled);
    int N = truncation;

    // Precondition: no certified norm excess at this t.
    {
        auto cert = omega_norm(scaled, N);
        double allowance = cert.tail_bound.value_or(0.0);
        if (cert.total - allowance - 1.0 > tol)
            throw Error("generator_split: s-membership fails at t=" + std::to_string(t) +
                        " (total " + std::to_string(cert.total) + ")");
    }

    // Pick the working size L so the truncated functional sums reproduce
    // e^{-t phi} on the section to ~1e-12 relative.
    int L = 2 * N + 8;
    const TailInfo& ti = scaled.tail;
    if (ti.has_geometric_bound && ti.coef > 0 && ti.ratio > 0 && ti.ratio < 1) {
        double target = 1e-13;
        double need = (std::log(ti.coef) - std::log(target)) / (-2.0 * std::log(ti.ratio)) +
                      static_cast<double>(N);
        L = std::max(L, static_cast<int>(std::ceil(need)) + 2);
    }
    L = std::min(L, 6000);

    Eigen::MatrixXd h = hankel_h(scaled).section(L);
    auto [hp, hm] = detail::jordan_parts(h);
    double ap_plus = std::max(consts.c_plus, 0.0), am_plus = std::max(-consts.c_plus, 0.0);
    double ap_minus = std::max(consts.c_minus, 0.0), am_minus = std::max(-consts.c_minus, 0.0);

    int section = N + 1;  // one extra row/col so sigma-differences cover the N block
    Eigen::MatrixXd phi_plus =
        detail::assemble_functional_kernel(hp, ap_plus, ap_minus, section);
    Eigen::MatrixXd phi_minus =
        detail::assemble_functional_kernel(hm, am_plus, am_minus, section);

    double c = phi_plus(0, 0);
    Eigen::MatrixXd psi = (c * Eigen::MatrixXd::Ones(section, section) - phi_plus) / t;
    Eigen::MatrixXd theta =
        ((1.0 - c) * Eigen::MatrixXd::Ones(section, section) + phi_minus) / t;

    SplitWitness w;
    w.psi = Kernel::from_real(psi, true);
    w.theta = Kernel::from_real(theta, true);

    // psi + theta must reproduce (1 - e^{-t phi})/t.
    Eigen::MatrixXd target = scaled.section(section);
    target = (Eigen::MatrixXd::Ones(section, section) - target) / t;
    double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
    w.reconstruction_error = (psi + theta - target).cwiseAbs().maxCoeff() / scale;

    // Truncation error of the Hahn-Jordan sums against the exact telescoping.
    double hj = 0.0;
    for (int m = 0; m < section; ++m)
        for (int n = 0; n < section; ++n) {
            int kk = L - std::max(m, n);
            double far = scaled.dot(m + n + 2 * kk);
            double lim = ((m - n) % 2 == 0) ? ti.even_limit : ti.odd_limit;
            hj = std::max(hj, std::abs(far - lim));
        }
    w.hahn_jordan_truncation_error = hj;

    w.psi_report = generator_conditions(w.psi, tol);
    w.theta_report = bounded_part_conditions(w.theta, tol);
    if (!w.psi_report.all_pass() || !w.theta_report.all_pass()) {
        std::string failing;
        auto collect = [&](const ConditionReport& rep) {
            for (size_t i = 0; i < rep.names.size(); ++i)
                if (!rep.verdicts[i]) failing += (failing.empty() ? "" : "; ") + rep.names[i];
        };
        collect(w.psi_report);
        collect(w.theta_report);
        throw Error("generator_split: certificate failed: " + failing);
    }
    return w;
}

}  // namespace hsm
