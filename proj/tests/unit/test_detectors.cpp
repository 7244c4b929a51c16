#include "otsm/detectors.hpp"
#include "otsm/modem.hpp"

#include <doctest.h>

using namespace otsm;

namespace {

SystemParams small_params() {
    SystemParams pr;
    pr.m = 4;
    pr.n = 2;
    pr.q = 2;
    pr.p = 2;
    pr.l_max = 3;
    pr.k_max = 1;
    return pr;
}

// Deliberately naive reference: odometer over per-symbol choices, building
// each candidate from scratch. Used as an independent oracle for the search.
CVec brute_force_ml(const CVec& y, const CMat& h, const Constellation& c) {
    const int mn = static_cast<int>(y.size());
    std::vector<int> digits(mn, 0);
    CVec best;
    double best_dist = std::numeric_limits<double>::infinity();
    while (true) {
        CVec x(mn);
        for (int s = 0; s < mn; ++s) x(s) = c.point(digits[s]);
        const double dist = (y - h * x).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = x;
        }
        int pos = 0;
        while (pos < mn) {
            if (++digits[pos] < c.q) break;
            digits[pos++] = 0;
        }
        if (pos == mn) break;
    }
    return best;
}

EffectiveChannel random_link(const SystemParams& pr, RngEngine& rng, Real sigma_rad = 0.01) {
    const RMat w = walsh_matrix(pr.n);
    const WindowDiagonal rect = sample_window(WindowKind::Rectangular, pr.m);
    const ChannelRealization ch = draw_channel(pr, rng);
    const PhnRealization phn = draw_phn(sigma_rad, pr.mn(), Theta0Mode::Uniform, 0.0, rng);
    return effective_channel(ch, phn, rect, rect, w);
}

}  // namespace

TEST_CASE("noiseless ML detection recovers the transmitted frame") {
    const SystemParams pr = small_params();
    const Constellation c = build_constellation(pr.q);
    RngEngine rng = make_engine(40);
    const RMat w = walsh_matrix(pr.n);
    const WindowDiagonal rect = sample_window(WindowKind::Rectangular, pr.m);
    for (int trial = 0; trial < 20; ++trial) {
        const EffectiveChannel ec = random_link(pr, rng);
        const DsFrame f = random_frame(c, pr, rng);
        const CVec x = f.vectorized();
        const CVec y = ec.h * x;
        CHECK((mld(y, ec.h, c) - x).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("search matches an independent brute-force enumerator") {
    const SystemParams pr = small_params();
    const Constellation c = build_constellation(pr.q);
    RngEngine rng = make_engine(41);
    const MldDetector det(c, pr.mn());
    for (int trial = 0; trial < 1000; ++trial) {
        const EffectiveChannel ec = random_link(pr, rng);
        const CVec x = random_frame(c, pr, rng).vectorized();
        const CVec y = ec.h * x + draw_cn_vector(rng, pr.mn(), n0_from_snr_db(6.0));
        const CVec got = det.detect(y, ec.h).x;
        const CVec expect = brute_force_ml(y, ec.h, c);
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("full tie breaks to the lowest candidate index") {
    const Constellation c = build_constellation(2);
    const int mn = 4;
    const CVec y = CVec::Zero(mn);
    const CMat h = CMat::Identity(mn, mn);
    const MldResult r = MldDetector(c, mn).detect(y, h);
    CHECK(r.index == 0);
    CHECK((r.x.array() == Complex(1, 0)).all());
}

TEST_CASE("decision is invariant to a global phase rotation") {
    const SystemParams pr = small_params();
    const Constellation c = build_constellation(pr.q);
    RngEngine rng = make_engine(42);
    const Complex rot = std::polar(1.0, 0.7);
    for (int trial = 0; trial < 50; ++trial) {
        const EffectiveChannel ec = random_link(pr, rng);
        const CVec x = random_frame(c, pr, rng).vectorized();
        const CVec y = ec.h * x + draw_cn_vector(rng, pr.mn(), 0.1);
        CHECK((mld(y, ec.h, c) - mld(rot * y, rot * ec.h, c)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("oversized search spaces are rejected with guidance") {
    const Constellation c = build_constellation(4);
    CHECK_THROWS_AS(MldDetector(c, 16), InfeasibleError);  // 4^16 = 2^32
    try {
        MldDetector(c, 16);
    } catch (const InfeasibleError& e) {
        CHECK(std::string(e.what()).find("LMMSE") != std::string::npos);
    }
    CHECK_NOTHROW(MldDetector(c, 10));  // 4^10 = 2^20 sits exactly on the guard
}

TEST_CASE("identity channel at unit noise halves the observation") {
    const Constellation c = build_constellation(2);
    const int mn = 6;
    RngEngine rng = make_engine(43);
    const CVec y = draw_cn_vector(rng, mn, 1.0);
    const SoftOutput so = lmmse(y, CMat::Identity(mn, mn), 1.0, c);
    CHECK((so.xhat - y / 2.0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((so.variances.array() - 0.5).abs().maxCoeff() < 1e-12);
}

TEST_CASE("near-zero noise makes the equalizer an inverse") {
    const Constellation c = build_constellation(2);
    const int mn = 4;
    RngEngine rng = make_engine(44);
    const CVec y = draw_cn_vector(rng, mn, 1.0);
    const SoftOutput so = lmmse(y, CMat::Identity(mn, mn), 1e-9, c);
    CHECK((so.xhat - y).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("scalar system matches the closed-form posterior mean") {
    RngEngine rng = make_engine(45);
    for (int trial = 0; trial < 25; ++trial) {
        const Complex h = draw_cn(rng, 1.0);
        const Complex mu = draw_cn(rng, 1.0);
        const Real d = 0.25 + trial * 0.1;
        const Real n0 = 0.3;
        const Complex yv = draw_cn(rng, 2.0);

        SymbolPrior prior;
        prior.mean = CVec::Constant(1, mu);
        prior.variance = RVec::Constant(1, d);
        CMat hm(1, 1);
        hm(0, 0) = h;
        CVec y(1);
        y(0) = yv;

        const SoftOutput so = lmmse_equalize(y, hm, n0, prior);
        const Complex expect = mu + d * std::conj(h) / (std::norm(h) * d + n0) * (yv - h * mu);
        CHECK(std::abs(so.xhat(0) - expect) < 1e-12);
        const Real vexpect = d - d * d * std::norm(h) / (std::norm(h) * d + n0);
        CHECK(so.variances(0) == doctest::Approx(vexpect).epsilon(1e-12));
    }
}

TEST_CASE("LLR signs follow and flip with the observation") {
    const Constellation c = build_constellation(2);
    const int mn = 8;
    RngEngine rng = make_engine(46);
    const CVec y = draw_cn_vector(rng, mn, 1.0);
    const CMat h = CMat::Identity(mn, mn);
    const SoftOutput pos = lmmse(y, h, 0.5, c);
    const SoftOutput neg = lmmse((-y).eval(), h, 0.5, c);
    for (int i = 0; i < mn; ++i) {
        CHECK(pos.llrs(i) == doctest::Approx(-neg.llrs(i)).epsilon(1e-12));
        CHECK((pos.llrs(i) > 0) == (pos.xhat(i).real() > 0));
    }
}

TEST_CASE("strong priors dominate the prior moments") {
    const Constellation c = build_constellation(2);
    const RVec llrs = RVec::Constant(5, kLlrClip);
    const SymbolPrior prior = prior_from_llrs(llrs, c, 5);
    CHECK((prior.mean.array() - Complex(1, 0)).abs().maxCoeff() < 1e-10);
    CHECK(prior.variance.maxCoeff() < 1e-10);

    const SymbolPrior flat = prior_from_llrs(RVec(), c, 5);
    CHECK(flat.mean.cwiseAbs().maxCoeff() == 0.0);
    CHECK((flat.variance.array() == 1.0).all());
}

TEST_CASE("QPSK soft decisions recover clean frames") {
    SystemParams pr = small_params();
    pr.q = 4;
    const Constellation c = build_constellation(pr.q);
    RngEngine rng = make_engine(47);
    for (int trial = 0; trial < 20; ++trial) {
        const EffectiveChannel ec = random_link(pr, rng, 0.0);
        const Bits bits = draw_bits(rng, static_cast<std::size_t>(pr.mn()) * c.bits_per_symbol);
        const CVec x = map_bits(bits, c);
        const CVec y = ec.h * x + draw_cn_vector(rng, pr.mn(), 1e-6);
        const SoftOutput so = lmmse(y, ec.h, 1e-6, c);
        for (std::size_t i = 0; i < bits.size(); ++i)
            CHECK((so.llrs(static_cast<Eigen::Index>(i)) < 0) == (bits[i] == 1));
    }
}

TEST_CASE("degenerate systems are rejected with a clear diagnosis") {
    const Constellation c = build_constellation(2);
    const CVec y = CVec::Ones(4);
    CHECK_THROWS_AS(lmmse(y, CMat::Zero(4, 4), 0.5, c), ConfigError);
    CHECK_THROWS_AS(lmmse(y, CMat::Identity(4, 4), 0.0, c), ConfigError);
    CHECK_THROWS_AS(lmmse(y, CMat::Identity(4, 4), -1.0, c), ConfigError);
}

TEST_CASE("optimal detection is never beaten by the linear equalizer") {
    const SystemParams pr = small_params();
    const Constellation c = build_constellation(pr.q);
    RngEngine rng = make_engine(48);
    const MldDetector det(c, pr.mn());
    const Real n0 = n0_from_snr_db(8.0);
    long mld_errors = 0, lmmse_errors = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        const EffectiveChannel ec = random_link(pr, rng);
        const Bits bits = draw_bits(rng, static_cast<std::size_t>(pr.mn()));
        const CVec x = map_bits(bits, c);
        const CVec y = ec.h * x + draw_cn_vector(rng, pr.mn(), n0);

        const Bits mld_bits = demap_hard(det.detect(y, ec.h).x, c);
        const SoftOutput so = lmmse(y, ec.h, n0, c);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            mld_errors += mld_bits[i] != bits[i];
            lmmse_errors += (so.llrs(static_cast<Eigen::Index>(i)) < 0) != (bits[i] == 1);
        }
    }
    CHECK(mld_errors > 0);  // the operating point is informative
    CHECK(lmmse_errors >= mld_errors);
}
