// Monte Carlo BER harness: determinism, stopping rules, thread invariance,
// and sanity of the measured error rates.
#include "otsm/montecarlo.hpp"

#include <doctest.h>

#include <cmath>

using namespace otsm;

namespace {

ExperimentConfig desk_config() {
    ExperimentConfig cfg;  // M=4, N=2, BPSK, P=2 defaults
    cfg.seed = 42;
    cfg.target_errors = 50;
    cfg.max_trials = 5000;
    return cfg;
}

bool same_point(const BerPoint& a, const BerPoint& b) {
    return a.snr_db == b.snr_db && a.n0 == b.n0 && a.trials == b.trials && a.bits == b.bits &&
           a.errors == b.errors && a.ber == b.ber && a.ci95 == b.ci95;
}

}  // namespace

TEST_CASE("a clean high-SNR link runs to the trial cap without errors") {
    ExperimentConfig cfg = desk_config();
    cfg.system.sigma2_phn = 0.0;
    cfg.system.snr_db = {40.0};
    cfg.target_errors = 1;
    cfg.max_trials = 50;
    const BerPoint pt = simulate_uncoded_point(cfg, WindowKind::Rectangular, 0);
    CHECK(pt.trials == 50);
    CHECK(pt.bits == 50 * 8);  // M*N BPSK bits per frame
    CHECK(pt.errors == 0);
    CHECK(pt.ber == 0.0);
    CHECK(pt.ci95 == 0.0);
    CHECK(pt.n0 == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("replays are bit-identical and thread-count invariant") {
    ExperimentConfig cfg = desk_config();
    cfg.system.snr_db = {8.0};
    const BerPoint a = simulate_uncoded_point(cfg, WindowKind::Hamming, 0);
    const BerPoint b = simulate_uncoded_point(cfg, WindowKind::Hamming, 0);
    CHECK(same_point(a, b));
    cfg.threads = 3;
    const BerPoint c = simulate_uncoded_point(cfg, WindowKind::Hamming, 0);
    CHECK(same_point(a, c));
    CHECK(a.errors >= 50);
    CHECK(a.ber > 0.0);
}

TEST_CASE("the stopping rule honors the error target in whole batches") {
    ExperimentConfig cfg = desk_config();
    cfg.system.snr_db = {0.0};
    cfg.target_errors = 30;
    cfg.max_trials = 100000;
    const BerPoint pt = simulate_uncoded_point(cfg, WindowKind::Rectangular, 0);
    CHECK(pt.errors >= 30);
    CHECK(pt.trials < cfg.max_trials);
    CHECK(pt.trials % 64 == 0);
    CHECK(pt.ber == static_cast<Real>(pt.errors) / static_cast<Real>(pt.bits));
    const Real ci = 1.96 * std::sqrt(pt.ber * (1.0 - pt.ber) / static_cast<Real>(pt.bits));
    CHECK(pt.ci95 == doctest::Approx(ci).epsilon(1e-12));
}

TEST_CASE("error rates fall with SNR") {
    ExperimentConfig cfg = desk_config();
    cfg.system.snr_db = {0.0, 14.0};
    cfg.target_errors = 100;
    const BerPoint low = simulate_uncoded_point(cfg, WindowKind::Rectangular, 0);
    const BerPoint high = simulate_uncoded_point(cfg, WindowKind::Rectangular, 1);
    CHECK(low.ber > high.ber);
}

TEST_CASE("the soft equalizer path measures a plausible rate") {
    ExperimentConfig cfg = desk_config();
    cfg.detector = DetectorKind::Lmmse;
    cfg.system.snr_db = {10.0};
    cfg.target_errors = 30;
    const BerPoint pt = simulate_uncoded_point(cfg, WindowKind::Rectangular, 0);
    CHECK(pt.errors >= 30);
    CHECK(pt.ber < 0.5);
}

TEST_CASE("hiding the phase trajectory from the detector costs errors") {
    ExperimentConfig cfg = desk_config();
    cfg.system.sigma2_phn = 100.0;  // 10 degree increments
    cfg.system.snr_db = {14.0};
    cfg.target_errors = 40;
    const BerPoint full = simulate_uncoded_point(cfg, WindowKind::Rectangular, 0);
    cfg.detector_csi = DetectorCsi::PhnBlind;
    const BerPoint blind = simulate_uncoded_point(cfg, WindowKind::Rectangular, 0);
    // Trials are paired, so the comparison is nearly noise-free.
    CHECK(blind.ber > full.ber);
}

TEST_CASE("curve wrappers reproduce the per-point results") {
    ExperimentConfig cfg = desk_config();
    cfg.system.snr_db = {2.0, 6.0};
    cfg.target_errors = 20;
    const BerCurve curve = simulate_uncoded_ber(cfg, WindowKind::Blackman);
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.window == WindowKind::Blackman);
    CHECK(same_point(curve.points[0], simulate_uncoded_point(cfg, WindowKind::Blackman, 0)));
    CHECK(same_point(curve.points[1], simulate_uncoded_point(cfg, WindowKind::Blackman, 1)));
    CHECK(curve.points[0].snr_db == 2.0);
    CHECK(curve.points[1].snr_db == 6.0);
}

TEST_CASE("snr indices are bounds-checked") {
    const ExperimentConfig cfg = desk_config();
    CHECK_THROWS_AS(simulate_uncoded_point(cfg, WindowKind::Rectangular, -1), ConfigError);
    CHECK_THROWS_AS(
        simulate_uncoded_point(cfg, WindowKind::Rectangular,
                               static_cast<int>(cfg.system.snr_db.size())),
        ConfigError);
}

TEST_CASE("code and interleaver construction is deterministic per seed") {
    ExperimentConfig cfg = desk_config();
    cfg.codeword_len = 64;
    const LdpcCode a = coded_run_code(cfg);
    const LdpcCode b = coded_run_code(cfg);
    CHECK(a.n == 64);
    CHECK(a.message_len == b.message_len);
    CHECK(a.check_vars == b.check_vars);
    CHECK(a.free_cols == b.free_cols);
    const Interleaver ia = coded_run_interleaver(cfg, a);
    const Interleaver ib = coded_run_interleaver(cfg, b);
    CHECK(ia.permutation() == ib.permutation());
    cfg.seed = 43;
    const Interleaver ic = coded_run_interleaver(cfg, coded_run_code(cfg));
    CHECK(ia.permutation() != ic.permutation());
}

TEST_CASE("the coded receiver decodes a clean high-SNR link") {
    ExperimentConfig cfg = desk_config();
    cfg.codeword_len = 64;
    cfg.t_det = 3;
    cfg.t_ldpc = 5;
    cfg.system.snr_db = {30.0};
    cfg.target_errors = 1;
    cfg.max_trials = 10;
    const LdpcCode code = coded_run_code(cfg);
    const Interleaver il = coded_run_interleaver(cfg, code);
    const BerPoint pt = simulate_coded_point(cfg, WindowKind::Rectangular, 0.3, 0, code, il);
    CHECK(pt.trials == 10);
    CHECK(pt.bits == 10 * static_cast<std::uint64_t>(code.message_len));
    CHECK(pt.errors == 0);
}

TEST_CASE("coded replays are deterministic and phase noise hurts when hidden") {
    ExperimentConfig cfg = desk_config();
    cfg.codeword_len = 64;
    cfg.t_det = 3;
    cfg.t_ldpc = 5;
    cfg.detector_csi = DetectorCsi::PhnBlind;
    cfg.system.snr_db = {7.0};
    cfg.target_errors = 10;
    cfg.max_trials = 192;
    const LdpcCode code = coded_run_code(cfg);
    const Interleaver il = coded_run_interleaver(cfg, code);
    const BerPoint quiet = simulate_coded_point(cfg, WindowKind::Rectangular, 0.3, 0, code, il);
    const BerPoint again = simulate_coded_point(cfg, WindowKind::Rectangular, 0.3, 0, code, il);
    CHECK(same_point(quiet, again));
    const BerPoint loud = simulate_coded_point(cfg, WindowKind::Rectangular, 400.0, 0, code, il);
    // Same trial seeds, only the oscillator differs.
    CHECK(loud.errors > quiet.errors);
}
