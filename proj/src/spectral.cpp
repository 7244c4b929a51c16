#include "otsm/spectral.hpp"

#include "otsm/constellation.hpp"
#include "otsm/transforms.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace otsm {

CVec synthesize_frames(const SystemParams& pr, WindowKind kind, int oversample,
                       const std::vector<DsFrame>& frames) {
    pr.validate();
    if (oversample < 4) throw ConfigError("synthesize_frames: oversample must be >= 4");
    const int m = pr.m;
    const int n = pr.n;
    const int om = oversample * m;

    // Window samples and subcarrier phases within one chip interval, in
    // units of the chip duration T.
    const Real t0 = static_cast<Real>(m - 1) / m;
    RVec g(om);
    for (int q = 0; q < om; ++q) g(q) = eval_window(kind, static_cast<Real>(q) / om, t0);
    CMat carriers(m, om);
    for (int mm = 0; mm < m; ++mm)
        for (int q = 0; q < om; ++q) {
            const Real ph = 2.0 * EIGEN_PI * mm * static_cast<Real>(q) / om;
            carriers(mm, q) = Complex(std::cos(ph), std::sin(ph));
        }

    const RMat walsh = walsh_matrix(n);
    const CMat dft = dft_matrix(m) / std::sqrt(static_cast<Real>(m));

    CVec stream = CVec::Zero(static_cast<Eigen::Index>(frames.size()) * n * om);
    Eigen::Index base = 0;
    for (const DsFrame& frame : frames) {
        if (frame.m() != m || frame.n() != n)
            throw ConfigError("synthesize_frames: frame does not match the parameter set");
        const CMat x_tf = dft * (frame.entries * walsh);
        for (int b = 0; b < n; ++b) {
            stream.segment(base, om) =
                (x_tf.col(b).transpose() * carriers).transpose().cwiseProduct(g.cast<Complex>());
            base += om;
        }
    }
    return stream;
}

CVec synthesize_oversampled(const SystemParams& pr, WindowKind kind, int oversample,
                            int n_frames, RngEngine& rng) {
    if (n_frames < 1) throw ConfigError("synthesize_oversampled: n_frames must be >= 1");
    const Constellation c = build_constellation(pr.q);
    std::vector<DsFrame> frames;
    frames.reserve(n_frames);
    for (int f = 0; f < n_frames; ++f) frames.push_back(random_frame(c, pr, rng));
    return synthesize_frames(pr, kind, oversample, frames);
}

PsdEstimate estimate_npsd(const CVec& stream, int segment_len, Real overlap_frac, int n_avg) {
    if (segment_len < 8) throw ConfigError("estimate_npsd: segment_len must be >= 8");
    if (!(overlap_frac >= 0.0 && overlap_frac < 1.0))
        throw ConfigError("estimate_npsd: overlap_frac must lie in [0, 1)");
    if (n_avg < 1) throw ConfigError("estimate_npsd: n_avg must be >= 1");
    const Eigen::Index seg = segment_len;
    const Eigen::Index hop =
        std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::lround(seg * (1.0 - overlap_frac))));
    const Eigen::Index needed = seg + static_cast<Eigen::Index>(n_avg - 1) * hop;
    if (stream.size() < needed)
        throw ConfigError("estimate_npsd: stream shorter than the requested segment schedule");

    RVec taper(seg);
    for (Eigen::Index i = 0; i < seg; ++i)
        taper(i) = 0.5 - 0.5 * std::cos(2.0 * EIGEN_PI * static_cast<Real>(i) / (seg - 1));
    const Real taper_power = taper.squaredNorm();
    const CVec taper_c = taper.cast<Complex>();

    Eigen::FFT<Real> fft;
    RVec acc = RVec::Zero(seg);
    CVec windowed(seg), bins(seg);
    for (int a = 0; a < n_avg; ++a) {
        windowed = stream.segment(a * hop, seg).cwiseProduct(taper_c);
        fft.fwd(bins, windowed);
        acc += bins.cwiseAbs2();
    }
    const RVec psd = acc / (static_cast<Real>(n_avg) * taper_power);

    PsdEstimate est;
    est.segment_len = segment_len;
    est.overlap = overlap_frac;
    est.n_avg = n_avg;
    est.mean_power = stream.head(needed).squaredNorm() / static_cast<Real>(needed);
    est.integrated_psd = psd.sum() / static_cast<Real>(seg);

    // Reorder to an ascending grid and drop the unpaired most-negative bin
    // so the grid is symmetric about 0.
    const Eigen::Index keep = seg % 2 == 0 ? seg - 1 : seg;
    est.freq.resize(keep);
    RVec shifted(keep);
    for (Eigen::Index i = 0; i < keep; ++i) {
        const Eigen::Index k = (seg - keep) + i;  // skip k = 0 (f = -1/2) when seg is even
        const Eigen::Index bin = (k + (seg + 1) / 2) % seg;
        est.freq(i) = (static_cast<Real>(bin) > (seg - 1) / 2.0 ? bin - seg : bin) /
                      static_cast<Real>(seg);
        shifted(i) = psd(bin);
    }
    const Real peak = shifted.maxCoeff();
    if (!(peak > 0.0)) throw ConfigError("estimate_npsd: zero-power stream");
    est.npsd_db = (shifted / peak)
                      .cwiseMax(std::pow(10.0, kNpsdFloorDb / 10.0))
                      .array()
                      .log10()
                      .matrix() *
                  10.0;
    return est;
}

OobeReport oobe_report(const PsdEstimate& psd, Real band_lo, Real band_hi,
                       const std::vector<Real>& offset_multiples) {
    if (psd.freq.size() < 3) throw ConfigError("oobe_report: empty spectrum");
    const Real fmin = psd.freq(0);
    const Real fmax = psd.freq(psd.freq.size() - 1);
    if (!(band_hi > band_lo) || band_lo <= fmin || band_hi >= fmax)
        throw ConfigError("oobe_report: band edges outside the frequency grid");
    const Real df = psd.freq(1) - psd.freq(0);
    const Real center = 0.5 * (band_lo + band_hi);
    const Real half_width = 0.5 * (band_hi - band_lo);

    auto level_at = [&](Real f) {
        const Eigen::Index i = static_cast<Eigen::Index>(std::lround((f - fmin) / df));
        return std::pow(10.0, psd.npsd_db(std::clamp<Eigen::Index>(i, 0, psd.freq.size() - 1)) / 10.0);
    };

    OobeReport report;
    report.band_center = center;
    report.band_half_width = half_width;
    for (Real mult : offset_multiples) {
        const Real off = mult * half_width;
        if (center + off >= fmax || center - off <= fmin)
            throw ConfigError("oobe_report: offset outside the frequency grid");
        OobeOffset pt;
        pt.multiple = mult;
        pt.freq = center + off;
        pt.npsd_db = 10.0 * std::log10(0.5 * (level_at(center + off) + level_at(center - off)));
        report.offsets.push_back(pt);
    }
    report.max_out_of_band_db = kNpsdFloorDb;
    for (Eigen::Index i = 0; i < psd.freq.size(); ++i)
        if (std::abs(psd.freq(i) - center) > half_width)
            report.max_out_of_band_db = std::max(report.max_out_of_band_db, psd.npsd_db(i));
    return report;
}

}  // namespace otsm
