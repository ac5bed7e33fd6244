#pragma once

// Finite truncations of kernels on N0 x N0, radial profiles with declared
// tails, Hankel lifts and the shift operators sigma, tau, tau*.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hsm {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense truncation of a kernel k : {0..N-1}^2 -> C.
struct Kernel {
    Eigen::MatrixXcd entries;
    bool hermitian = false;
    bool real = false;

    Kernel() = default;

    Kernel(Eigen::MatrixXcd e, bool herm) : entries(std::move(e)), hermitian(herm) {
        if (entries.rows() < 1 || entries.rows() != entries.cols())
            throw Error("Kernel: need a square matrix of size >= 1");
        if (hermitian) {
            double dev = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
            double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
            if (dev > 1e-12 * scale)
                throw Error("Kernel: hermitian flag set but entries are not hermitian");
        }
        real = entries.imag().cwiseAbs().maxCoeff() == 0.0;
    }

    static Kernel from_real(const Eigen::MatrixXd& m, bool herm) {
        return Kernel(m.cast<cplx>(), herm);
    }

    int size() const { return static_cast<int>(entries.rows()); }
    cplx operator()(int i, int j) const { return entries(i, j); }
    Eigen::MatrixXd real_part() const { return entries.real(); }
};

// ---------------------------------------------------------------------------
// Radial profiles and their tails.

/// Behaviour of phi-dot(n) beyond the stored prefix.
struct ProfileTail {
    enum class Kind { Zero, Constants, Analytic };
    enum class Rule { Exp, Geometric, Power };

    Kind kind = Kind::Zero;

    // Constants: phi(n) = c_plus + c_minus * (-1)^n for n past the prefix.
    double c_plus = 0.0;
    double c_minus = 0.0;

    // Analytic rules.
    Rule rule = Rule::Exp;
    double t = 1.0;        // Exp: e^{-t n}
    double ratio = 0.5;    // Geometric: ratio^n
    double coef = 1.0;     // Power: coef * n^exponent
    double exponent = 1.0;

    static ProfileTail zero() { return ProfileTail{}; }
    static ProfileTail constants(double cp, double cm) {
        ProfileTail tl;
        tl.kind = Kind::Constants;
        tl.c_plus = cp;
        tl.c_minus = cm;
        return tl;
    }
    static ProfileTail exp_rule(double t) {
        ProfileTail tl;
        tl.kind = Kind::Analytic;
        tl.rule = Rule::Exp;
        tl.t = t;
        return tl;
    }
    static ProfileTail geometric_rule(double r) {
        ProfileTail tl;
        tl.kind = Kind::Analytic;
        tl.rule = Rule::Geometric;
        tl.ratio = r;
        return tl;
    }
    static ProfileTail power_rule(double coef, double exponent) {
        ProfileTail tl;
        tl.kind = Kind::Analytic;
        tl.rule = Rule::Power;
        tl.coef = coef;
        tl.exponent = exponent;
        return tl;
    }

    double eval(long n) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Constants: return c_plus + c_minus * ((n % 2 == 0) ? 1.0 : -1.0);
            case Kind::Analytic:
                switch (rule) {
                    case Rule::Exp: return std::exp(-t * static_cast<double>(n));
                    case Rule::Geometric: return std::pow(ratio, static_cast<double>(n));
                    case Rule::Power: return coef * std::pow(static_cast<double>(n), exponent);
                }
        }
        throw Error("ProfileTail: unreachable");
    }
};

/// Radial profile phi-dot : N0 -> R. Values 0..prefix.size()-1 are stored;
/// past them the declared tail rule applies.
struct RadialProfile {
    std::vector<double> prefix;
    ProfileTail tail;

    double eval(long n) const {
        if (n < 0) throw Error("RadialProfile: negative index");
        if (n < static_cast<long>(prefix.size())) return prefix[static_cast<size_t>(n)];
        return tail.eval(n);
    }
};

// ---------------------------------------------------------------------------
// Hankel kernels phi~(m,n) = phi-dot(m+n) with tail metadata.

enum class LimitKind { Finite, DivergesPlus, Divergent };

/// Analytic facts about the sequence backing a HankelKernel, used for exact
/// diagonal limits and for trace-norm tail bounds.
struct TailInfo {
    LimitKind kind = LimitKind::Finite;
    double even_limit = 0.0;  // limit over even n   (Finite only)
    double odd_limit = 0.0;   // limit over odd n

    // |phi(n) - (c+ + c- (-1)^n)| <= coef * ratio^n for n >= start, where
    // c+/c- come from the limits. ratio in [0,1).
    bool has_geometric_bound = false;
    double coef = 0.0;
    double ratio = 0.0;
    long start = 0;

    // phi(n) >= slope * n for n >= minorant_start (DivergesPlus only).
    bool has_linear_minorant = false;
    double slope = 0.0;
    long minorant_start = 0;

    bool limits_exist() const { return kind == LimitKind::Finite; }
    double c_plus() const { return 0.5 * (even_limit + odd_limit); }
    double c_minus() const { return 0.5 * (even_limit - odd_limit); }
};

struct HankelKernel {
    std::function<double(long)> dot;
    TailInfo tail;

    double operator()(long m, long n) const { return dot(m + n); }

    Eigen::MatrixXd section(int n) const {
        if (n < 1) throw Error("HankelKernel::section: size must be >= 1");
        std::vector<double> d(static_cast<size_t>(2 * n - 1));
        for (long s = 0; s < 2 * n - 1; ++s) d[static_cast<size_t>(s)] = dot(s);
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = d[static_cast<size_t>(i + j)];
        return m;
    }

    Kernel section_kernel(int n) const { return Kernel::from_real(section(n), true); }
};

/// phi~(m,n) = phi-dot(m+n), with tail metadata derived from the declared rule.
inline HankelKernel lift_radial(const RadialProfile& profile) {
    HankelKernel h;
    long prefix_end = static_cast<long>(profile.prefix.size());
    h.dot = [profile](long n) { return profile.eval(n); };

    TailInfo& ti = h.tail;
    switch (profile.tail.kind) {
        case ProfileTail::Kind::Zero:
            ti.kind = LimitKind::Finite;
            ti.even_limit = ti.odd_limit = 0.0;
            ti.has_geometric_bound = true;
            ti.coef = 0.0;
            ti.ratio = 0.5;
            ti.start = prefix_end;
            break;
        case ProfileTail::Kind::Constants:
            ti.kind = LimitKind::Finite;
            ti.even_limit = profile.tail.c_plus + profile.tail.c_minus;
            ti.odd_limit = profile.tail.c_plus - profile.tail.c_minus;
            ti.has_geometric_bound = true;
            ti.coef = 0.0;
            ti.ratio = 0.5;
            ti.start = prefix_end;
            break;
        case ProfileTail::Kind::Analytic:
            switch (profile.tail.rule) {
                case ProfileTail::Rule::Exp: {
                    double r = std::exp(-profile.tail.t);
                    ti.kind = LimitKind::Finite;
                    ti.even_limit = ti.odd_limit = 0.0;
                    ti.has_geometric_bound = (r < 1.0);
                    ti.coef = 1.0;
                    ti.ratio = r;
                    ti.start = prefix_end;
                    if (!(r < 1.0)) ti.kind = LimitKind::Divergent;
                    break;
                }
                case ProfileTail::Rule::Geometric: {
                    double r = profile.tail.ratio;
                    if (std::abs(r) < 1.0) {
                        ti.kind = LimitKind::Finite;
                        ti.even_limit = ti.odd_limit = 0.0;
                        ti.has_geometric_bound = true;
                        ti.coef = 1.0;
                        ti.ratio = std::abs(r);
                        ti.start = prefix_end;
                    } else if (r >= 1.0) {
                        ti.kind = (r == 1.0) ? LimitKind::Finite : LimitKind::DivergesPlus;
                        if (r == 1.0) {
                            ti.even_limit = ti.odd_limit = 1.0;
                            ti.has_geometric_bound = true;
                            ti.coef = 0.0;
                            ti.ratio = 0.5;
                            ti.start = prefix_end;
                        }
                    } else {
                        ti.kind = LimitKind::Divergent;
                    }
                    break;
                }
                case ProfileTail::Rule::Power: {
                    double a = profile.tail.coef, p = profile.tail.exponent;
                    if (a == 0.0 || p == 0.0) {
                        ti.kind = LimitKind::Finite;
                        ti.even_limit = ti.odd_limit = (p == 0.0 ? a : 0.0);
                        ti.has_geometric_bound = true;
                        ti.coef = 0.0;
                        ti.ratio = 0.5;
                        ti.start = prefix_end;
                    } else if (a > 0.0 && p >= 1.0) {
                        ti.kind = LimitKind::DivergesPlus;
                        ti.has_linear_minorant = true;
                        ti.slope = a;  // a n^p >= a n for n >= 1, p >= 1
                        ti.minorant_start = std::max<long>(1, prefix_end);
                    } else {
                        ti.kind = LimitKind::Divergent;
                    }
                    break;
                }
            }
            break;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Shifts.

/// sigma(k)(m,n) = k(m+1,n+1); the result has size N-1.
inline Kernel shift_sigma(const Kernel& k) {
    int n = k.size();
    if (n <= 1) throw Error("shift_sigma: result would be empty");
    return Kernel(k.entries.block(1, 1, n - 1, n - 1).eval(), k.hermitian);
}

/// sigma on a Hankel kernel just advances the sequence by two.
inline HankelKernel shift_sigma(const HankelKernel& h) {
    HankelKernel out = h;
    auto base = h.dot;
    out.dot = [base](long n) { return base(n + 2); };
    out.tail.start = std::max<long>(0, out.tail.start - 2);
    if (out.tail.has_geometric_bound) out.tail.coef *= out.tail.ratio * out.tail.ratio;
    if (out.tail.has_linear_minorant) out.tail.minorant_start = std::max<long>(0, out.tail.minorant_start - 2);
    return out;
}

/// tau shifts down-right and fills row/column 0 with zeros; size grows to N+1
/// so no information is lost.
inline Kernel tau(const Kernel& k) {
    int n = k.size();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    out.block(1, 1, n, n) = k.entries;
    return Kernel(std::move(out), k.hermitian);
}

/// tau*(k) = k o sigma.
inline Kernel tau_star(const Kernel& k) { return shift_sigma(k); }

/// Entrywise e^{-t k}.
inline Kernel exp_scale(const Kernel& k, double t) {
    if (!(t > 0)) throw Error("exp_scale: t must be positive");
    Eigen::MatrixXcd out = (-t * k.entries).array().exp();
    return Kernel(std::move(out), k.hermitian && k.real);
}

/// Entrywise e^{-t phi} on a Hankel kernel, with the tail metadata mapped
/// through the exponential.
inline HankelKernel exp_scale(const HankelKernel& h, double t) {
    if (!(t > 0)) throw Error("exp_scale: t must be positive");
    HankelKernel out;
    auto base = h.dot;
    out.dot = [base, t](long n) { return std::exp(-t * base(n)); };

    const TailInfo& ti = h.tail;
    TailInfo& to = out.tail;
    if (ti.kind == LimitKind::Finite) {
        to.kind = LimitKind::Finite;
        to.even_limit = std::exp(-t * ti.even_limit);
        to.odd_limit = std::exp(-t * ti.odd_limit);
        if (ti.has_geometric_bound) {
            // |e^{-ta} - e^{-tb}| <= t |a-b| e^{t max(|a|,|b|)}
            double bound = std::max(std::abs(ti.even_limit), std::abs(ti.odd_limit)) + ti.coef;
            to.has_geometric_bound = true;
            to.coef = t * ti.coef * std::exp(t * bound);
            to.ratio = ti.ratio;
            to.start = ti.start;
        }
    } else if (ti.kind == LimitKind::DivergesPlus && ti.has_linear_minorant) {
        to.kind = LimitKind::Finite;
        to.even_limit = to.odd_limit = 0.0;
        to.has_geometric_bound = true;
        to.coef = 1.0;
        to.ratio = std::exp(-t * ti.slope);
        to.start = ti.minorant_start;
    } else {
        throw Error("exp_scale: tail of e^{-t phi} cannot be certified from the descriptor");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fixed-size shift helpers (nilpotent tau on an N-section; used by the F/G
// calculus where the section size must not change).

inline Eigen::MatrixXcd tau_section(const Eigen::MatrixXcd& m) {
    Eigen::Index n = m.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    if (n > 1) out.block(1, 1, n - 1, n - 1) = m.topLeftCorner(n - 1, n - 1);
    return out;
}

inline Eigen::MatrixXcd sigma_section(const Eigen::MatrixXcd& m) {
    Eigen::Index n = m.rows();
    if (n <= 1) throw Error("sigma_section: result would be empty");
    return m.block(1, 1, n - 1, n - 1);
}

}  // namespace hsm
