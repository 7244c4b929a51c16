#include "otsm/constellation.hpp"
#include "otsm/frame.hpp"
#include "otsm/params.hpp"
#include "otsm/rng.hpp"

#include <doctest.h>

using namespace otsm;

TEST_CASE("constellation point tables") {
    const Constellation bpsk = build_constellation(2);
    CHECK(bpsk.points(0) == Complex(1, 0));
    CHECK(bpsk.points(1) == Complex(-1, 0));

    const Constellation qpsk = build_constellation(4);
    const double r2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(qpsk.points(0) - Complex(r2, r2)) < 1e-15);   // bits 00
    CHECK(std::abs(qpsk.points(3) - Complex(-r2, -r2)) < 1e-15); // bits 11

    CHECK_THROWS_AS(build_constellation(8), ConfigError);
    CHECK_THROWS_AS(build_constellation(3), ConfigError);
}

TEST_CASE("constellations have exactly unit average energy") {
    for (int q : {2, 4, 16, 64}) {
        const Constellation c = build_constellation(q);
        CHECK(c.points.squaredNorm() / q == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("adjacent QAM levels differ in exactly one bit per axis") {
    for (int q : {16, 64}) {
        const Constellation c = build_constellation(q);
        // Sort unique in-phase levels and check the Gray property between
        // horizontally adjacent points at fixed quadrature bits.
        const int axis_bits = c.bits_per_symbol / 2;
        const int levels = 1 << axis_bits;
        for (int vq = 0; vq < levels; ++vq) {
            std::vector<std::pair<double, int>> by_level;
            for (int vi = 0; vi < levels; ++vi) {
                const int pattern = (vi << axis_bits) | vq;
                by_level.emplace_back(c.points(pattern).real(), pattern);
            }
            std::sort(by_level.begin(), by_level.end());
            for (std::size_t i = 1; i < by_level.size(); ++i) {
                const int diff = by_level[i].second ^ by_level[i - 1].second;
                CHECK(std::popcount(static_cast<unsigned>(diff)) == 1);
            }
        }
    }
}

TEST_CASE("bit mapping round trips and fills column-major") {
    RngEngine rng = make_engine(42);
    for (int q : {2, 4, 16, 64}) {
        const Constellation c = build_constellation(q);
        const Bits bits = draw_bits(rng, 24 * c.bits_per_symbol);
        const CVec x = map_bits(bits, c);
        CHECK(demap_hard(x, c) == bits);
    }

    SystemParams pr;
    pr.m = 4;
    pr.n = 2;
    pr.q = 4;
    const Constellation c = build_constellation(4);
    Bits bits(static_cast<std::size_t>(pr.mn()) * 2, 0);
    const DsFrame f = map_frame(bits, c, pr);
    const double r2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f.entries(0, 0) - Complex(r2, r2)) < 1e-15);  // bits 00 in the corner

    // Column-major stacking: entry (m, n) sits at index n*M + m.
    const CVec v = f.vectorized();
    CHECK(v(5) == f.entries(1, 1));
    CHECK((unvec(v, 4, 2) - f.entries).cwiseAbs().maxCoeff() == 0.0);

    Bits wrong(7, 0);
    CHECK_THROWS_AS(map_bits(wrong, c), ConfigError);
}

TEST_CASE("all-zero bits map to the all-plus-one BPSK frame") {
    SystemParams pr;
    pr.m = 4;
    pr.n = 2;
    pr.q = 2;
    const Bits bits(8, 0);
    const DsFrame f = map_frame(bits, build_constellation(2), pr);
    CHECK((f.entries.array() == Complex(1, 0)).all());
}

TEST_CASE("bit distance between symbol vectors") {
    const Constellation bpsk = build_constellation(2);
    CVec x(3), y(3);
    x << 1, -1, 1;
    y = x;
    CHECK(hamming_distance(x, y, bpsk) == 0);
    y(1) = 1;
    CHECK(hamming_distance(x, y, bpsk) == 1);

    const Constellation qpsk = build_constellation(4);
    const double r2 = 1.0 / std::sqrt(2.0);
    CVec a(1), b(1);
    a << Complex(r2, r2);
    b << Complex(-r2, -r2);
    CHECK(hamming_distance(a, b, qpsk) == 2);
}

TEST_CASE("empirical symbol energy is unit over random frames") {
    RngEngine rng = make_engine(7, 1);
    const Constellation c = build_constellation(16);
    double acc = 0.0;
    const int count = 100000;
    const Bits bits = draw_bits(rng, static_cast<std::size_t>(count) * c.bits_per_symbol);
    const CVec x = map_bits(bits, c);
    acc = x.squaredNorm() / count;
    CHECK(acc > 0.99);
    CHECK(acc < 1.01);
}

TEST_CASE("seed derivation is deterministic and label-sensitive") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1) != derive_seed(2));

    RngEngine a = make_engine(99, 5);
    RngEngine b = make_engine(99, 5);
    for (int i = 0; i < 16; ++i) CHECK(a() == b());
}

TEST_CASE("complex Gaussian draws have the requested variance") {
    RngEngine rng = make_engine(3);
    const CVec v = draw_cn_vector(rng, 200000, 0.25);
    const double var = v.squaredNorm() / v.size();
    CHECK(var == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("derived lattice quantities") {
    SystemParams pr;
    pr.m = 4;
    pr.n = 2;
    pr.delta_f = 15e3;
    CHECK(pr.symbol_time() == doctest::Approx(1.0 / 15e3));
    CHECK(pr.bandwidth() == doctest::Approx(60e3));
    CHECK(pr.frame_duration() == doctest::Approx(2.0 / 15e3));
    CHECK(pr.mn() == 8);

    CHECK(n0_from_snr_db(0.0) == doctest::Approx(1.0));
    CHECK(n0_from_snr_db(10.0) == doctest::Approx(0.1));
    CHECK(n0_from_snr_db(-3.0) == doctest::Approx(std::pow(10.0, 0.3)));
}

TEST_CASE("doppler limit from explicit value or velocity") {
    SystemParams pr;
    pr.n = 2;
    pr.k_max_mode = KmaxMode::Explicit;
    pr.k_max = 1;
    CHECK(doppler_limit(pr) == 1);

    pr.k_max_mode = KmaxMode::FromVelocity;
    pr.v_max = 0.0;
    pr.f_c = 4e9;
    CHECK(doppler_limit(pr) == 0);

    pr.n = 16;
    pr.delta_f = 18.75e3;
    pr.v_max = 800.0;
    CHECK(doppler_limit(pr) == 3);

    pr.v_max = -1.0;
    CHECK_THROWS_AS(doppler_limit(pr), ConfigError);
}

TEST_CASE("parameter validation rejects inconsistent setups") {
    SystemParams pr;
    pr.validate();

    SystemParams bad = pr;
    bad.q = 7;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = pr;
    bad.n = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = pr;
    bad.l_max = bad.m;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = pr;
    bad.m = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = pr;
    bad.delta_f = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = pr;
    bad.sigma2_phn = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("phase-noise strength units") {
    SystemParams pr;
    pr.sigma2_phn = 0.3;
    pr.phn_unit = PhnUnit::VarianceDeg2;
    CHECK(pr.phn_sigma_rad() == doctest::Approx(std::sqrt(0.3) * EIGEN_PI / 180.0));
    pr.phn_unit = PhnUnit::StddevDeg;
    CHECK(pr.phn_sigma_rad() == doctest::Approx(0.3 * EIGEN_PI / 180.0));
}
