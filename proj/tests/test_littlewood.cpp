#include <doctest.h>

#include <random>

#include "hsm/littlewood.hpp"

using namespace hsm;

namespace {

void check_split_invariants(const Eigen::MatrixXcd& a) {
    auto split = littlewood_split(a);
    CHECK((split.b + split.c - a).cwiseAbs().maxCoeff() == 0.0);
    CHECK(split.supports_disjoint);
    if (a.rows() <= 8) {
        double t2 = t2_norm(a);
        double lu = l_norm_upper(split);
        CHECK(lu <= t2 + 1e-12);
        CHECK(t2 <= 2.0 * lu + 1e-12);
    }
}

}  // namespace

TEST_CASE("t2_norm closed forms") {
    for (int n : {2, 4, 6}) {
        CHECK(t2_norm(Eigen::MatrixXcd::Identity(n, n).eval()) == doctest::Approx(1.0));
        CHECK(t2_norm(Eigen::MatrixXcd::Ones(n, n).eval()) == doctest::Approx(std::sqrt(n)));
    }
    CHECK_THROWS_AS(t2_norm(Eigen::MatrixXcd::Ones(9, 9).eval()), Error);
    CHECK_THROWS_AS(t2_norm(Eigen::MatrixXcd::Ones(2, 3).eval()), Error);
}

TEST_CASE("t2_norm dominated by the Frobenius norm") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng() % 4);
        Eigen::MatrixXcd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
        CHECK(t2_norm(a) <= a.norm() + 1e-12);
    }
}

TEST_CASE("littlewood_split explicit cases") {
    auto ids = littlewood_split(Eigen::MatrixXcd::Identity(4, 4).eval());
    CHECK(l_norm_upper(ids) <= 1.0 + 1e-12);

    auto ones = littlewood_split(Eigen::MatrixXcd::Ones(4, 4).eval());
    CHECK(l_norm_upper(ones) <= 2.0 + 1e-12);
    check_split_invariants(Eigen::MatrixXcd::Ones(4, 4));

    Eigen::MatrixXcd single(1, 1);
    single(0, 0) = cplx(3.0, -1.0);
    auto s = littlewood_split(single);
    CHECK(s.b(0, 0) == single(0, 0));
    CHECK(s.c(0, 0) == cplx(0.0, 0.0));

    auto z = littlewood_split(Eigen::MatrixXcd::Zero(3, 3).eval());
    CHECK(l_norm_upper(z) == 0.0);
}

TEST_CASE("sandwich on random sign matrices") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        Eigen::MatrixXcd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = (rng() & 1) ? 1.0 : -1.0;
        check_split_invariants(a);
    }
}

TEST_CASE("sandwich on random real matrices") {
    std::mt19937 rng(78);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        Eigen::MatrixXcd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
        check_split_invariants(a);
    }
}
