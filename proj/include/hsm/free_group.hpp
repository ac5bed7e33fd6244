#pragma once

// Free-group combinatorics: reduced words, metric balls, group kernel
// matrices for radial functions, and the end-to-end radial B2-norm formulas.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hsm/kernel.hpp"
#include "hsm/qtransform.hpp"
#include "hsm/toeplitz.hpp"

namespace hsm {

/// Reduced word over generators 1..n; inverses are negative.
struct Word {
    std::vector<int8_t> letters;

    int length() const { return static_cast<int>(letters.size()); }

    Word inverse() const {
        Word w;
        w.letters.reserve(letters.size());
        for (auto it = letters.rbegin(); it != letters.rend(); ++it)
            w.letters.push_back(static_cast<int8_t>(-*it));
        return w;
    }

    /// Reduced concatenation this * other.
    Word operator*(const Word& other) const {
        Word w = *this;
        for (int8_t l : other.letters) {
            if (!w.letters.empty() && w.letters.back() == -l)
                w.letters.pop_back();
            else
                w.letters.push_back(l);
        }
        return w;
    }

    bool operator==(const Word& other) const { return letters == other.letters; }
};

/// All reduced words of length <= radius in F_n, breadth-first, identity first.
inline std::vector<Word> enumerate_ball(int n_generators, int radius,
                                        std::size_t cap = 20000) {
    if (radius < 0) throw Error("enumerate_ball: radius must be >= 0");
    if (n_generators < 2) throw Error("enumerate_ball: need at least 2 generators");
    // Exact count: 1 + sum_k 2n (2n-1)^{k-1}.
    double expected = 1.0;
    double layer = 2.0 * n_generators;
    for (int k = 1; k <= radius; ++k) {
        expected += layer;
        layer *= 2.0 * n_generators - 1.0;
    }
    if (expected > static_cast<double>(cap))
        throw Error("enumerate_ball: ball size exceeds cap");

    std::vector<Word> ball;
    ball.push_back(Word{});
    std::size_t layer_begin = 0;
    for (int k = 1; k <= radius; ++k) {
        std::size_t layer_end = ball.size();
        for (std::size_t i = layer_begin; i < layer_end; ++i) {
            for (int g = 1; g <= n_generators; ++g) {
                for (int s : {g, -g}) {
                    if (!ball[i].letters.empty() && ball[i].letters.back() == -s) continue;
                    Word w = ball[i];
                    w.letters.push_back(static_cast<int8_t>(s));
                    ball.push_back(std::move(w));
                }
            }
        }
        layer_begin = layer_end;
    }
    return ball;
}

/// Group kernel matrix: entry(x,y) = phi-dot(|y^{-1} x|).
inline Kernel group_matrix(const RadialProfile& profile, const std::vector<Word>& ball) {
    Eigen::Index n = static_cast<Eigen::Index>(ball.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Word rel = ball[static_cast<size_t>(j)].inverse() * ball[static_cast<size_t>(i)];
            m(i, j) = profile.eval(rel.length());
        }
    }
    return Kernel::from_real(m, true);
}

/// Splitting phi-dot(n) = c+ + c- (-1)^n + psi-dot(n).
struct RadialConstants {
    double c_plus = 0.0;
    double c_minus = 0.0;
    std::function<double(long)> remainder;
};

inline RadialConstants c_constants(const RadialProfile& profile) {
    HankelKernel h = lift_radial(profile);
    if (!h.tail.limits_exist())
        throw Error("c_constants: even/odd limits do not exist");
    RadialConstants out;
    out.c_plus = h.tail.c_plus();
    out.c_minus = h.tail.c_minus();
    double cp = out.c_plus, cm = out.c_minus;
    out.remainder = [profile, cp, cm](long n) {
        return profile.eval(n) - cp - cm * ((n % 2 == 0) ? 1.0 : -1.0);
    };
    return out;
}

struct GroupChoice {
    bool infinite = true;
    int n_generators = 0;  // valid when !infinite

    static GroupChoice f_inf() { return GroupChoice{true, 0}; }
    static GroupChoice f_n(int n) {
        if (n < 2) throw Error("GroupChoice: need at least 2 generators");
        return GroupChoice{false, n};
    }
    int q() const { return 2 * n_generators - 1; }
};

/// ||phi||_{B2} for a radial function: |c+| + |c-| + ||h||_1 on F_inf, and
/// |c+| + |c-| + ||F h||_1 with q = 2n-1 on F_n.
inline OmegaNormCertificate radial_b2_norm(const RadialProfile& profile, const GroupChoice& group,
                                           int truncation) {
    HankelKernel lifted = lift_radial(profile);
    if (!lifted.tail.limits_exist())
        throw Error("radial_b2_norm: not a Herz-Schur multiplier at declared tail");
    if (group.infinite) return omega_norm(lifted, truncation);
    return chi_norm(lifted, group.q(), truncation);
}

}  // namespace hsm
