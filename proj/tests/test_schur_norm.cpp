#include <doctest.h>

#include <random>

#include "hsm/schur_norm.hpp"
#include "oracles.hpp"

using namespace hsm;

TEST_CASE("gilbert_feasible on explicit cases") {
    Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(2, 2);
    auto r = gilbert_feasible(ones, 1.0, 1e-8);
    CHECK(r.status == Feasibility::Feasible);
    REQUIRE(r.witness.has_value());
    CHECK((r.witness->b - ones).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((r.witness->c - ones).cwiseAbs().maxCoeff() <= 1e-6);

    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
    CHECK(gilbert_feasible(id, 0.5, 1e-8).status == Feasibility::Infeasible);

    Eigen::Matrix2d hada;
    hada << 1, 1, -1, 1;
    CHECK(gilbert_feasible(hada.cast<cplx>(), 1.5, 1e-8).status == Feasibility::Feasible);

    CHECK_THROWS_AS(gilbert_feasible(id, 0.0, 1e-8), Error);
}

TEST_CASE("gilbert witness soundness") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        Eigen::MatrixXd a = oracle::random_symmetric(n, rng);
        double C = a.jacobiSvd().singularValues().sum();  // feasible for sure
        auto r = gilbert_feasible(a.cast<cplx>(), C, 1e-8);
        REQUIRE(r.status == Feasibility::Feasible);
        REQUIRE(r.witness.has_value());
        CHECK(r.witness->b.diagonal().real().maxCoeff() <= 1.0 + 1e-8);
        CHECK(r.witness->c.diagonal().real().maxCoeff() <= 1.0 + 1e-8);
        Eigen::MatrixXcd m(2 * n, 2 * n);
        m.topLeftCorner(n, n) = r.witness->b;
        m.bottomRightCorner(n, n) = r.witness->c;
        m.block(0, n, n, n) = a.cast<cplx>() / C;
        m.block(n, 0, n, n) = a.cast<cplx>().adjoint() / C;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -(r.witness->residual + 1e-12));
    }
}

TEST_CASE("schur_norm oracle cases") {
    for (int n : {2, 5, 10}) {
        auto id = schur_norm(Eigen::MatrixXcd::Identity(n, n).eval(), 1e-6);
        CHECK(id.value == doctest::Approx(1.0).epsilon(1e-4));
        auto ones = schur_norm(Eigen::MatrixXcd::Ones(n, n).eval(), 1e-6);
        CHECK(ones.value == doctest::Approx(1.0).epsilon(1e-4));
    }

    Eigen::Matrix2d hada;
    hada << 1, 1, -1, 1;
    double reference = oracle::schur_norm_2x2(hada);
    auto cert = schur_norm(hada.cast<cplx>().eval(), 1e-6);
    CHECK(cert.value == doctest::Approx(reference).epsilon(1e-4));
    CHECK(cert.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
    CHECK(cert.lower_bracket <= cert.value);
    CHECK(cert.value <= cert.upper_bracket);

    auto zero = schur_norm(Eigen::MatrixXcd::Zero(3, 3).eval(), 1e-6);
    CHECK(zero.value == 0.0);
}

TEST_CASE("schur_norm entry and trace-norm bounds") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        Eigen::MatrixXd a = oracle::random_symmetric(n, rng);
        auto cert = schur_norm(a.cast<cplx>().eval(), 1e-5);
        CHECK(cert.value >= a.cwiseAbs().maxCoeff() - 1e-5);
        CHECK(cert.value <= a.jacobiSvd().singularValues().sum() + 1e-5);
    }
}

TEST_CASE("unit-diagonal Gram matrices have norm one") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd g = oracle::random_unit_gram(8, rng);
        auto cert = schur_norm(g.cast<cplx>().eval(), 1e-5);
        CHECK(cert.value == doctest::Approx(1.0).epsilon(2e-4));
    }
}

TEST_CASE("factorization_witness reconstructs the matrix") {
    std::mt19937 rng(31);
    Eigen::MatrixXd a = oracle::random_symmetric(4, rng);
    auto cert = schur_norm(a.cast<cplx>().eval(), 1e-6);
    double C = cert.upper_bracket * (1 + 1e-2);
    auto r = gilbert_feasible(a.cast<cplx>(), C, 1e-8);
    REQUIRE(r.status == Feasibility::Feasible);
    auto fw = factorization_witness(a.cast<cplx>(), *r.witness, C, 1e-6);
    Eigen::MatrixXcd recon = fw.p * fw.q.adjoint();
    CHECK((recon - a.cast<cplx>()).cwiseAbs().maxCoeff() <= 1e-5);
    for (int i = 0; i < 4; ++i) {
        CHECK(fw.p.row(i).norm() <= std::sqrt(C) * (1 + 1e-5));
        CHECK(fw.q.row(i).norm() <= std::sqrt(C) * (1 + 1e-5));
    }

    // All-ones at C=1: identical unit vectors on both sides.
    Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(3, 3);
    auto ro = gilbert_feasible(ones, 1.0, 1e-8);
    REQUIRE(ro.status == Feasibility::Feasible);
    auto fo = factorization_witness(ones, *ro.witness, 1.0, 1e-6);
    for (int i = 0; i < 3; ++i) {
        CHECK(fo.p.row(i).norm() == doctest::Approx(1.0).epsilon(1e-4));
        CHECK((fo.p.row(i) - fo.q.row(i)).norm() <= 1e-4);
    }
}

TEST_CASE("restricted_norm") {
    std::mt19937 rng(43);
    Eigen::MatrixXd a = oracle::random_symmetric(6, rng);
    Kernel k = Kernel::from_real(a, true);

    auto single = restricted_norm(k, {2}, 1e-6);
    CHECK(single.value == doctest::Approx(std::abs(a(2, 2))).epsilon(1e-4));

    double tol = 1e-5;
    auto f1 = restricted_norm(k, {0, 1, 2}, tol);
    auto f2 = restricted_norm(k, {0, 1, 2, 3, 4}, tol);
    double slack = (f1.upper_bracket - f1.lower_bracket) + (f2.upper_bracket - f2.lower_bracket);
    CHECK(f1.value <= f2.value + slack + 2e-6);

    std::vector<int> full{0, 1, 2, 3, 4, 5};
    auto whole = restricted_norm(k, full, tol);
    auto direct = schur_norm(k, tol);
    CHECK(whole.value == doctest::Approx(direct.value).epsilon(1e-3));

    CHECK_THROWS_AS(restricted_norm(k, {}, tol), Error);
    CHECK_THROWS_AS(restricted_norm(k, {7}, tol), Error);
}
