#include "otsm/transforms.hpp"

#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include <random>

using namespace otsm;

namespace {

int sign_changes(const Eigen::RowVectorXd& row) {
    int count = 0;
    for (Eigen::Index j = 1; j < row.size(); ++j)
        if (row(j) * row(j - 1) < 0.0) ++count;
    return count;
}

CVec random_cvec(Eigen::Index n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v;
}

}  // namespace

TEST_CASE("walsh matrix small orders") {
    const RMat w1 = walsh_matrix(1);
    CHECK(w1(0, 0) == doctest::Approx(1.0));

    const RMat w2 = walsh_matrix(2);
    const double r2 = 1.0 / std::sqrt(2.0);
    CHECK(w2(0, 0) == doctest::Approx(r2));
    CHECK(w2(0, 1) == doctest::Approx(r2));
    CHECK(w2(1, 0) == doctest::Approx(r2));
    CHECK(w2(1, 1) == doctest::Approx(-r2));

    // Order 4, rows by sign pattern: ++++ / ++-- / +--+ / +-+-
    const RMat w4 = walsh_matrix(4) * 2.0;
    const RMat expected{{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, -1, 1}, {1, -1, 1, -1}};
    CHECK((w4 - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("walsh matrix rejects non-powers-of-two") {
    CHECK_THROWS_AS(walsh_matrix(3), ConfigError);
    CHECK_THROWS_AS(walsh_matrix(0), ConfigError);
    CHECK_THROWS_AS(walsh_matrix(-4), ConfigError);
    CHECK_THROWS_AS(walsh_matrix(12), ConfigError);
}

TEST_CASE("walsh matrix is symmetric self-inverse with sequency-ordered rows") {
    for (int n : {2, 4, 8, 16, 32, 64}) {
        const RMat w = walsh_matrix(n);
        CHECK((w - w.transpose()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((w * w - RMat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
        for (int k = 0; k < n; ++k) CHECK(sign_changes(w.row(k)) == k);
    }
}

TEST_CASE("dft matrix") {
    const CMat f1 = dft_matrix(1);
    CHECK(std::abs(f1(0, 0) - Complex(1, 0)) < 1e-15);

    const CMat f2 = dft_matrix(2);
    const double r2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f2(1, 1) - Complex(-r2, 0)) < 1e-15);

    const CMat f4 = dft_matrix(4);
    CHECK(std::abs(f4(1, 1) - Complex(0, -0.5)) < 1e-15);  // e^{-j pi/2}/2
    CHECK((f4 * f4.adjoint() - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(dft_matrix(0), ConfigError);
}

TEST_CASE("apply_kron identity factors leave input unchanged") {
    const CVec v = random_cvec(6, 11);
    const CVec out = apply_kron_vec(RMat::Identity(3, 3), RVec::Ones(2), v);
    CHECK((out - v).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("apply_kron matches dense Kronecker oracle") {
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    for (int m : {2, 3, 5, 8}) {
        for (int n : {2, 4, 8}) {
            RMat w(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) w(i, j) = gauss(rng);
            RVec g(m);
            for (Eigen::Index i = 0; i < m; ++i) g(i) = gauss(rng);
            const CVec v = random_cvec(m * n, 100 + m * 10 + n);

            const RMat dense = Eigen::kroneckerProduct(w, RMat(g.asDiagonal()));
            const CVec expect = dense * v;
            const CVec got = apply_kron_vec(w, g, v);
            CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("apply_kron round trip through inverse diagonal") {
    const RMat w = walsh_matrix(4);
    RVec g(3);
    g << 0.5, 1.0, 2.0;
    const CVec v = random_cvec(12, 21);
    const CVec mid = apply_kron_vec(w, g, v);
    const CVec back = apply_kron_vec(w, g.cwiseInverse(), mid);
    CHECK((back - v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_kron rejects mismatched dimensions") {
    CHECK_THROWS_AS(apply_kron_vec(RMat::Identity(2, 2), RVec::Ones(3), CVec::Zero(5)), ConfigError);
    CHECK_THROWS_AS(apply_kron(RMat::Ones(2, 3), RVec::Ones(2), CVec::Zero(6)), ConfigError);
}

TEST_CASE("fast transform agrees with dense matrix") {
    for (int n : {2, 8, 32}) {
        const RMat w = walsh_matrix(n);
        const CVec v = random_cvec(n, 300 + n);
        CVec fast = v;
        fwht_sequency(fast);
        CHECK((fast - (w * v).eval()).cwiseAbs().maxCoeff() < 1e-12);
    }
    VecX<double> bad = VecX<double>::Zero(6);
    CHECK_THROWS_AS(fwht_sequency(bad), ConfigError);
}
