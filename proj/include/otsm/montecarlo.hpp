// Monte Carlo BER measurement: per-trial seed derivation for reproducible
// and parallel-safe runs, error-event stopping, and binomial confidence
// intervals. Trials are paired across windows and phase-noise levels by
// excluding both from the seed stream.
#pragma once

#include "otsm/config.hpp"
#include "otsm/ldpc.hpp"

#include <cstdint>
#include <vector>

namespace otsm {

struct BerPoint {
    Real snr_db = 0.0;
    Real n0 = 0.0;
    std::uint64_t trials = 0;  // frames (uncoded) or codewords (coded)
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    Real ber = 0.0;
    Real ci95 = 0.0;
};

struct BerCurve {
    WindowKind window = WindowKind::Rectangular;
    std::vector<BerPoint> points;
};

/// One SNR point of uncoded detection, stopping at
/// min(errors >= target_errors, trials >= max_trials).
BerPoint simulate_uncoded_point(const ExperimentConfig& cfg, WindowKind window, int snr_idx);

/// One SNR point of the LDPC-coded receiver; sigma2 overrides the
/// phase-noise magnitude (in the configured unit). Message bits are counted.
BerPoint simulate_coded_point(const ExperimentConfig& cfg, WindowKind window, Real sigma2,
                              int snr_idx, const LdpcCode& code, const Interleaver& il);

BerCurve simulate_uncoded_ber(const ExperimentConfig& cfg, WindowKind window);
BerCurve simulate_coded_ber(const ExperimentConfig& cfg, WindowKind window, Real sigma2);

/// Code and interleaver a coded run uses: deterministic per config seed.
LdpcCode coded_run_code(const ExperimentConfig& cfg);
Interleaver coded_run_interleaver(const ExperimentConfig& cfg, const LdpcCode& code);

}  // namespace otsm
