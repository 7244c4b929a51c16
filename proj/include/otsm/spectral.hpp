// Oversampled multicarrier waveform synthesis and averaged-periodogram
// spectrum estimation for out-of-band emission comparisons between transmit
// window shapes.
#pragma once

#include "otsm/frame.hpp"
#include "otsm/params.hpp"
#include "otsm/windows.hpp"

#include <vector>

namespace otsm {

/// Reportable floor: spectra are clipped here so peak-normalized values stay
/// finite when bins underflow.
inline constexpr Real kNpsdFloorDb = -300.0;

/// Averaged-periodogram spectrum estimate, peak-normalized to 0 dB.
struct PsdEstimate {
    RVec freq;      // cycles per sample, uniform grid symmetric about 0
    RVec npsd_db;   // 10 log10(P / max P), clipped at kNpsdFloorDb
    int segment_len = 0;
    Real overlap = 0.0;
    int n_avg = 0;
    Real mean_power = 0.0;      // mean |s|^2 over the analyzed span
    Real integrated_psd = 0.0;  // sum_k P_k / segment_len
};

/// Out-of-band emission levels of one spectrum at configured offsets.
struct OobeOffset {
    Real multiple = 0.0;  // distance from band center, in half-bandwidths
    Real freq = 0.0;      // cycles per sample, positive side
    Real npsd_db = 0.0;   // two-sided average at +/- the offset
};

struct OobeReport {
    Real band_center = 0.0;      // cycles per sample
    Real band_half_width = 0.0;  // cycles per sample
    std::vector<OobeOffset> offsets;
    Real max_out_of_band_db = kNpsdFloorDb;
};

/// Evaluates s(t) = sum_n sum_m X_TF(m,n) g_tx(t - nT) e^{j2pi m df (t - nT)}
/// at t = q / (O M df), frames back to back with no guard samples. The
/// window is evaluated in continuous time, so taking every O-th sample
/// reproduces the discrete transmit chain.
CVec synthesize_frames(const SystemParams& pr, WindowKind kind, int oversample,
                       const std::vector<DsFrame>& frames);

/// Draws n_frames i.i.d. random frames and synthesizes them back to back.
CVec synthesize_oversampled(const SystemParams& pr, WindowKind kind, int oversample,
                            int n_frames, RngEngine& rng);

/// Averaged periodogram with a smooth taper and fractional segment overlap.
/// Uses exactly n_avg segments and rejects streams too short to supply them.
PsdEstimate estimate_npsd(const CVec& stream, int segment_len, Real overlap_frac, int n_avg);

/// Emission levels at offsets measured from the band center in multiples of
/// the half-bandwidth, plus the worst out-of-band bin. The occupied band is
/// [band_lo, band_hi] in cycles per sample; the synthesized multicarrier
/// band spans subcarriers 0..M-1, so it is not centered on zero.
OobeReport oobe_report(const PsdEstimate& psd, Real band_lo, Real band_hi,
                       const std::vector<Real>& offset_multiples = {1.5, 2.0});

/// Occupied band of the synthesized stream in cycles per sample at the
/// oversampled rate: subcarrier centers 0..(M-1) df plus half a spacing on
/// each side, width exactly M df.
inline std::pair<Real, Real> occupied_band(const SystemParams& pr, int oversample) {
    const Real df = 1.0 / (static_cast<Real>(oversample) * pr.m);
    return {-0.5 * df, (pr.m - 0.5) * df};
}

}  // namespace otsm
