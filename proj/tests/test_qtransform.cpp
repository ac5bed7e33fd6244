#include <doctest.h>

#include <random>

#include "hsm/qtransform.hpp"
#include "oracles.hpp"

using namespace hsm;

TEST_CASE("F on a delta kernel") {
    int q = 3, n = 6;
    Eigen::MatrixXcd delta = Eigen::MatrixXcd::Zero(n, n);
    delta(0, 0) = 1.0;
    Eigen::MatrixXcd f = F_apply(delta, q);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double expected = (i == j) ? (2.0 / 3.0) * std::pow(1.0 / 3.0, i) : 0.0;
            CHECK(f(i, j).real() == doctest::Approx(expected));
            CHECK(f(i, j).imag() == 0.0);
        }
    CHECK(F_apply(Eigen::MatrixXcd::Zero(4, 4).eval(), q).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("G on explicit kernels") {
    int q = 3;
    Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(5, 5);
    CHECK((G_apply(ones, q) - ones).cwiseAbs().maxCoeff() <= 1e-14);

    std::mt19937 rng(3);
    Eigen::MatrixXcd k = oracle::random_symmetric(6, rng).cast<cplx>();
    CHECK(G_apply(k, q)(0, 0) == k(0, 0));

    Eigen::MatrixXcd d11 = Eigen::MatrixXcd::Zero(6, 6);
    d11(1, 1) = 1.0;
    Eigen::MatrixXcd g = G_apply(d11, q);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            double expected = 0.0;
            if (i == j && i >= 1) expected = (2.0 / 3.0) * std::pow(1.0 / 3.0, i - 1);
            CHECK(g(i, j).real() == doctest::Approx(expected));
        }
}

TEST_CASE("inverse identities and the intertwining lemma") {
    std::mt19937 rng(99);
    for (int q : {3, 5, 9}) {
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::MatrixXcd k = oracle::random_symmetric(30, rng).cast<cplx>();
            double scale = k.cwiseAbs().maxCoeff();
            CHECK((F_inv(F_apply(k, q), q) - k).cwiseAbs().maxCoeff() <= 1e-13 * scale);
            CHECK((G_inv(G_apply(k, q), q) - k).cwiseAbs().maxCoeff() <= 1e-13 * scale);
            CHECK(fg_identity_residual(k, q) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("F and G preserve hermitian sections and sup bounds") {
    std::mt19937 rng(7);
    for (int q : {3, 5}) {
        Eigen::MatrixXcd k = oracle::random_symmetric(20, rng).cast<cplx>();
        for (const Eigen::MatrixXcd& img :
             {F_apply(k, q), G_apply(k, q), F_inv(k, q), G_inv(k, q)}) {
            CHECK((img - img.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        }
        CHECK(F_apply(k, q).cwiseAbs().maxCoeff() <= k.cwiseAbs().maxCoeff() + 1e-12);
    }
}

TEST_CASE("chi_norm explicit values") {
    RadialProfile one{{}, ProfileTail::constants(1.0, 0.0)};
    for (int q : {3, 5}) {
        auto cert = chi_norm(lift_radial(one), q, 40);
        CHECK(cert.hankel_trace_norm <= 1e-12);
        CHECK(cert.total == doctest::Approx(1.0));
    }

    RadialProfile expo{{}, ProfileTail::exp_rule(1.0)};
    auto cert = chi_norm(lift_radial(expo), 3, 300);
    CHECK(cert.total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("translation identity chi_phi = omega_{G phi}") {
    std::mt19937 rng(12);
    for (int q : {3, 5}) {
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::MatrixXd m = oracle::random_symmetric(20, rng);
            Kernel k = Kernel::from_real(m, true);
            double chi = chi_norm(k, q).total;
            double omega = omega_norm_of_G(k, q).total;
            CHECK(std::abs(chi - omega) <= 1e-9 * std::max(1.0, chi));
        }
    }
}

TEST_CASE("q_state_conditions") {
    RadialProfile one{{}, ProfileTail::constants(1.0, 0.0)};
    CHECK(q_state_conditions(lift_radial(one), 3, 10, 1e-9).all_pass());

    RadialProfile expo{{}, ProfileTail::exp_rule(1.0)};
    CHECK(q_state_conditions(lift_radial(expo), 3, 40, 1e-9).all_pass());

    RadialProfile grow{{1.0, 2.0, 4.0, 8.0}, ProfileTail::constants(8.0, 0.0)};
    auto rep = q_state_conditions(lift_radial(grow), 3, 3, 1e-9);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("q_generator_conditions") {
    RadialProfile lin{{}, ProfileTail::power_rule(1.0, 1.0)};
    CHECK(q_generator_conditions(lift_radial(lin), 3, 15, 1e-9).all_pass());

    RadialProfile zero{{}, ProfileTail::zero()};
    CHECK(q_generator_conditions(lift_radial(zero), 3, 10, 1e-9).all_pass());

    RadialProfile sq{{}, ProfileTail::power_rule(1.0, 2.0)};
    auto rep = q_generator_conditions(lift_radial(sq), 3, 4, 1e-9);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("q_s_membership") {
    std::vector<double> grid{1.0, 0.3, 0.1, 0.03, 0.01};
    RadialProfile lin{{}, ProfileTail::power_rule(1.0, 1.0)};
    for (int q : {3, 5}) {
        auto ev = q_s_membership(lift_radial(lin), q, grid, 60, 1e-6);
        CHECK(ev.consistent);
        for (const auto& cert : ev.certificates) CHECK(cert.total <= 1.0 + 1e-6);
    }

    RadialProfile c{{}, ProfileTail::constants(0.4, 0.0)};
    CHECK(q_s_membership(lift_radial(c), 3, grid, 30, 1e-6).consistent);

    RadialProfile sq{{}, ProfileTail::power_rule(1.0, 2.0)};
    auto bad = q_s_membership(lift_radial(sq), 3, grid, 400, 1e-6);
    CHECK_FALSE(bad.consistent);
}
