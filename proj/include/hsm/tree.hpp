#pragma once

// Finite portion of the homogeneous tree of degree q+1 with a fixed boundary
// end omega, the contraction map c toward omega, and the (m,n) pair geometry.

#include <functional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "hsm/kernel.hpp"

namespace hsm {

/// Ball of a given radius around a basepoint sitting on the spine toward
/// omega. c is the parent pointer; spine vertices are stored beyond the ball
/// so every c-orbit stays inside the portion.
class TreePortion {
  public:
    TreePortion(int q, int radius) : q_(q), radius_(radius) {
        if (q < 2) throw Error("TreePortion: q must be >= 2");
        if (radius < 0) throw Error("TreePortion: radius must be >= 0");
        // Spine s_0 .. s_L with c(s_i) = s_{i+1}; basepoint is s_0. Orbits of
        // ball vertices meet the spine within depth `radius`, and confluence
        // points lie within spine index 2*radius.
        spine_len_ = 2 * radius + 2;
        for (int i = 0; i < spine_len_; ++i) {
            parent_.push_back(i + 1);  // c(s_i) = s_{i+1}; last fixed up below
            dist_to_base_.push_back(i);
            in_ball_.push_back(i <= radius);
        }
        parent_[static_cast<size_t>(spine_len_ - 1)] = spine_len_ - 1;  // orbit cap

        // Children hanging off the spine and below, inside the radius.
        // s_0 has q children besides its parent s_1; s_i (i>=1) has q-1
        // children besides s_{i-1} and s_{i+1}; non-spine vertices have q
        // children.
        struct Pending {
            int id;
            int dist;
        };
        std::vector<Pending> frontier;
        auto add_child = [&](int parent, int dist) {
            int id = static_cast<int>(parent_.size());
            parent_.push_back(parent);
            dist_to_base_.push_back(dist);
            in_ball_.push_back(true);
            frontier.push_back({id, dist});
            return id;
        };
        if (radius >= 1) {
            for (int c = 0; c < q_; ++c) add_child(0, 1);
            for (int i = 1; i <= radius - 1; ++i)
                for (int c = 0; c < q_ - 1; ++c) add_child(i, i + 1);
        }
        for (std::size_t f = 0; f < frontier.size(); ++f) {
            Pending p = frontier[f];
            if (p.dist >= radius) continue;
            for (int c = 0; c < q_; ++c) add_child(p.id, p.dist + 1);
        }
    }

    int q() const { return q_; }
    int radius() const { return radius_; }
    int vertex_count() const { return static_cast<int>(parent_.size()); }
    int contraction(int v) const { return parent_.at(static_cast<size_t>(v)); }
    bool in_ball(int v) const { return in_ball_.at(static_cast<size_t>(v)); }

    std::vector<int> ball_vertices() const {
        std::vector<int> out;
        for (int v = 0; v < vertex_count(); ++v)
            if (in_ball(v)) out.push_back(v);
        return out;
    }

    /// Smallest (m, n) with c^m(x) on [y, omega[ and c^n(y) on [x, omega[;
    /// both orbits meet at c^m(x) = c^n(y).
    std::pair<int, int> mn_pair(int x, int y) const {
        check(x);
        check(y);
        std::unordered_map<int, int> orbit_x;
        int v = x;
        for (int m = 0;; ++m) {
            orbit_x.emplace(v, m);
            if (contraction(v) == v) break;
            v = contraction(v);
        }
        v = y;
        for (int n = 0;; ++n) {
            auto it = orbit_x.find(v);
            if (it != orbit_x.end()) return {it->second, n};
            if (contraction(v) == v)
                throw Error("TreePortion::mn_pair: orbits never meet (corrupt portion)");
            v = contraction(v);
        }
    }

    /// Number of triples violating m(x,y)-n(x,y) = m(x,z)-n(x,z)+m(z,y)-n(z,y)
    /// over the whole ball.
    long additivity_check() const {
        std::vector<int> ball = ball_vertices();
        int n = static_cast<int>(ball.size());
        Eigen::MatrixXi diff(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto [m, nn] = mn_pair(ball[static_cast<size_t>(i)], ball[static_cast<size_t>(j)]);
                diff(i, j) = m - nn;
            }
        long violations = 0;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j)
                    if (diff(i, j) != diff(i, k) + diff(k, j)) ++violations;
        return violations;
    }

  private:
    void check(int v) const {
        if (v < 0 || v >= vertex_count()) throw Error("TreePortion: vertex outside portion");
    }

    int q_;
    int radius_;
    int spine_len_;
    std::vector<int> parent_;
    std::vector<int> dist_to_base_;
    std::vector<bool> in_ball_;
};

/// Lift phi on N0^2 to the tree ball: entry(x,y) = phi(m(x,y), n(x,y)).
inline Kernel tree_lift_phi(const std::function<cplx(int, int)>& phi, const TreePortion& tree) {
    std::vector<int> ball = tree.ball_vertices();
    Eigen::Index n = static_cast<Eigen::Index>(ball.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            auto [a, b] = tree.mn_pair(ball[static_cast<size_t>(i)], ball[static_cast<size_t>(j)]);
            m(i, j) = phi(a, b);
        }
    bool herm = (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
    return Kernel(std::move(m), herm);
}

}  // namespace hsm
