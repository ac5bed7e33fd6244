#include <doctest.h>

#include <queue>

#include "hsm/free_group.hpp"
#include "hsm/schur_norm.hpp"
#include "hsm/tree.hpp"

using namespace hsm;

TEST_CASE("enumerate_ball counts") {
    CHECK(enumerate_ball(2, 0).size() == 1);
    CHECK(enumerate_ball(2, 1).size() == 5);
    CHECK(enumerate_ball(2, 2).size() == 17);
    CHECK(enumerate_ball(2, 3).size() == 53);
    CHECK(enumerate_ball(3, 2).size() == 1 + 6 + 30);
    CHECK_THROWS_AS(enumerate_ball(2, 10, 100), Error);

    // Reduced, deduplicated.
    auto ball = enumerate_ball(2, 3);
    for (const Word& w : ball)
        for (size_t i = 0; i + 1 < w.letters.size(); ++i)
            CHECK(w.letters[i] != -w.letters[i + 1]);
    for (size_t i = 0; i < ball.size(); ++i)
        for (size_t j = i + 1; j < ball.size(); ++j) CHECK_FALSE(ball[i] == ball[j]);
}

TEST_CASE("word arithmetic") {
    Word a{{1}}, b{{2}};
    CHECK((a * a.inverse()).length() == 0);
    CHECK((b.inverse() * a).length() == 2);
    Word w{{1, 2, -1}};
    CHECK((w * w.inverse()).length() == 0);
}

TEST_CASE("group_matrix") {
    auto ball = enumerate_ball(2, 1);
    RadialProfile one{{}, ProfileTail::constants(1.0, 0.0)};
    Kernel m1 = group_matrix(one, ball);
    CHECK((m1.entries.real().array() == 1.0).all());

    RadialProfile geo{{1.0, 0.5, 0.25}, ProfileTail::zero()};
    Kernel mg = group_matrix(geo, ball);
    for (int i = 0; i < mg.size(); ++i) CHECK(mg(i, i).real() == doctest::Approx(1.0));
    // ball order: e, a1, a1^{-1}, a2, a2^{-1}; |a2^{-1} a1| = 2.
    CHECK(mg(1, 3).real() == doctest::Approx(0.25));
}

TEST_CASE("c_constants") {
    RadialProfile c3{{}, ProfileTail::constants(3.0, 0.0)};
    auto cc = c_constants(c3);
    CHECK(cc.c_plus == doctest::Approx(3.0));
    CHECK(cc.c_minus == doctest::Approx(0.0));

    // phi(n) = 2 + (-1)^n + 2^{-n}: remainder is the geometric part.
    RadialProfile mix{{4.0, 1.5, 3.25, 1.125}, ProfileTail::constants(2.0, 1.0)};
    auto cm = c_constants(mix);
    CHECK(cm.c_plus == doctest::Approx(2.0));
    CHECK(cm.c_minus == doctest::Approx(1.0));
    for (int n = 0; n < 4; ++n) CHECK(cm.remainder(n) == doctest::Approx(std::pow(2.0, -n)));

    RadialProfile alt{{}, ProfileTail::constants(0.0, 5.0)};
    auto ca = c_constants(alt);
    CHECK(ca.c_plus == doctest::Approx(0.0));
    CHECK(ca.c_minus == doctest::Approx(5.0));
}

TEST_CASE("radial_b2_norm") {
    RadialProfile geo{{}, ProfileTail::geometric_rule(0.5)};
    CHECK(radial_b2_norm(geo, GroupChoice::f_inf(), 80).total == doctest::Approx(1.0));

    RadialProfile alt{{}, ProfileTail::constants(0.0, 1.0)};
    auto cert = radial_b2_norm(alt, GroupChoice::f_inf(), 40);
    CHECK(cert.hankel_trace_norm <= 1e-12);
    CHECK(cert.total == doctest::Approx(1.0));

    RadialProfile expo{{}, ProfileTail::exp_rule(0.5)};
    CHECK(radial_b2_norm(expo, GroupChoice::f_n(2), 300).total ==
          doctest::Approx(1.0).epsilon(1e-6));

    RadialProfile lin{{}, ProfileTail::power_rule(1.0, 1.0)};
    CHECK_THROWS_AS(radial_b2_norm(lin, GroupChoice::f_inf(), 40), Error);
}

TEST_CASE("ball restriction sandwich") {
    RadialProfile p{{1.0, 0.5, 0.25}, ProfileTail::zero()};
    double full = radial_b2_norm(p, GroupChoice::f_n(2), 50).total;
    double tol = 1e-5;
    auto r1 = schur_norm(group_matrix(p, enumerate_ball(2, 1)), tol);
    auto r2 = schur_norm(group_matrix(p, enumerate_ball(2, 2)), tol);
    double slack = (r1.upper_bracket - r1.lower_bracket) + (r2.upper_bracket - r2.lower_bracket);
    CHECK(r1.value <= r2.value + slack + 2e-6);
    CHECK(r2.value <= full + 1e-4);
}

TEST_CASE("tree portion basics") {
    TreePortion tree(3, 3);
    CHECK(tree.ball_vertices().size() == 53);
    TreePortion small(3, 2);
    CHECK(small.ball_vertices().size() == 17);
    CHECK_THROWS_AS(TreePortion(1, 2), Error);

    CHECK(tree.mn_pair(0, 0) == std::pair<int, int>{0, 0});
    int parent = tree.contraction(0);
    CHECK(tree.mn_pair(0, parent) == std::pair<int, int>{1, 0});
    CHECK(tree.mn_pair(parent, 0) == std::pair<int, int>{0, 1});
}

TEST_CASE("mn_pair symmetry and distance cross-check") {
    TreePortion tree(3, 3);
    auto ball = tree.ball_vertices();

    // Independent graph distance via BFS over the undirected parent edges.
    int V = tree.vertex_count();
    std::vector<std::vector<int>> adj(static_cast<size_t>(V));
    for (int v = 0; v < V; ++v) {
        int p = tree.contraction(v);
        if (p != v) {
            adj[static_cast<size_t>(v)].push_back(p);
            adj[static_cast<size_t>(p)].push_back(v);
        }
    }
    auto bfs_dist = [&](int src, int dst) {
        std::vector<int> d(static_cast<size_t>(V), -1);
        std::queue<int> qq;
        d[static_cast<size_t>(src)] = 0;
        qq.push(src);
        while (!qq.empty()) {
            int v = qq.front();
            qq.pop();
            if (v == dst) return d[static_cast<size_t>(v)];
            for (int w : adj[static_cast<size_t>(v)])
                if (d[static_cast<size_t>(w)] < 0) {
                    d[static_cast<size_t>(w)] = d[static_cast<size_t>(v)] + 1;
                    qq.push(w);
                }
        }
        return -1;
    };

    for (int x : ball)
        for (int y : ball) {
            auto [m, n] = tree.mn_pair(x, y);
            auto [m2, n2] = tree.mn_pair(y, x);
            CHECK(m == n2);
            CHECK(n == m2);
            CHECK(m + n == bfs_dist(x, y));
        }
}

TEST_CASE("additivity over all triples") {
    CHECK(TreePortion(3, 2).additivity_check() == 0);
    CHECK(TreePortion(3, 3).additivity_check() == 0);
}

TEST_CASE("tree lift of the modulus-one cocycle is positive definite") {
    TreePortion tree(3, 2);
    cplx s = std::polar(1.0, 1.1);
    Kernel lifted = tree_lift_phi(
        [s](int m, int n) { return std::pow(s, m - n); }, tree);
    CHECK(lifted.hermitian);
    for (int i = 0; i < lifted.size(); ++i) CHECK(std::abs(lifted(i, i) - cplx(1.0, 0.0)) <= 1e-12);
    CHECK(is_positive_definite(lifted, 1e-9).verdict);

    Kernel all1 = tree_lift_phi([](int, int) { return cplx(1.0, 0.0); }, tree);
    CHECK((all1.entries.real().array() == 1.0).all());
}
