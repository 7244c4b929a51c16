#include "otsm/montecarlo.hpp"

#include "otsm/detectors.hpp"
#include "otsm/modem.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <thread>

namespace otsm {

namespace {

constexpr std::uint64_t kUncodedTag = 0xbe4;
constexpr std::uint64_t kCodedTag = 0xc0d;
constexpr std::uint64_t kCodeTag = 0x7dc;
constexpr std::uint64_t kInterleaverTag = 0x17e;
constexpr std::uint64_t kTrialBatch = 64;

struct Tally {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
};

std::uint64_t bit_mismatches(const Bits& a, const Bits& b) {
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

Bits hard_bits(const RVec& llrs) {
    Bits out(llrs.size());
    for (Eigen::Index i = 0; i < llrs.size(); ++i) out[i] = llrs(i) < 0.0 ? 1 : 0;
    return out;
}

PhnRealization csi_phn(const PhnRealization& phn, DetectorCsi csi) {
    if (csi == DetectorCsi::Full) return phn;
    PhnRealization blind;
    blind.theta = RVec::Constant(phn.theta.size(), phn.theta(0));
    return blind;
}

void finalize(BerPoint& pt) {
    pt.ber = pt.bits ? static_cast<Real>(pt.errors) / static_cast<Real>(pt.bits) : 0.0;
    pt.ci95 = pt.bits ? 1.96 * std::sqrt(pt.ber * (1.0 - pt.ber) / static_cast<Real>(pt.bits))
                      : 0.0;
}

/// Runs trials in fixed-size batches until the error target or trial cap is
/// hit. Batch composition is independent of the thread count, and partial
/// tallies merge in worker order, so results do not depend on scheduling.
void run_batches(const ExperimentConfig& cfg, BerPoint& pt,
                 const std::function<Tally(std::uint64_t)>& trial) {
    const std::uint64_t target = static_cast<std::uint64_t>(cfg.target_errors);
    while (pt.errors < target && pt.trials < cfg.max_trials) {
        const std::uint64_t batch = std::min<std::uint64_t>(kTrialBatch, cfg.max_trials - pt.trials);
        std::vector<Tally> parts(cfg.threads);
        if (cfg.threads <= 1) {
            for (std::uint64_t i = 0; i < batch; ++i) {
                const Tally t = trial(pt.trials + i);
                parts[0].bits += t.bits;
                parts[0].errors += t.errors;
            }
        } else {
            std::vector<std::thread> workers;
            for (int w = 0; w < cfg.threads; ++w) {
                const std::uint64_t lo = batch * w / cfg.threads;
                const std::uint64_t hi = batch * (w + 1) / cfg.threads;
                workers.emplace_back([&, w, lo, hi] {
                    for (std::uint64_t i = lo; i < hi; ++i) {
                        const Tally t = trial(pt.trials + i);
                        parts[w].bits += t.bits;
                        parts[w].errors += t.errors;
                    }
                });
            }
            for (std::thread& w : workers) w.join();
        }
        for (const Tally& t : parts) {
            pt.bits += t.bits;
            pt.errors += t.errors;
        }
        pt.trials += batch;
    }
    finalize(pt);
}

}  // namespace

BerPoint simulate_uncoded_point(const ExperimentConfig& cfg, WindowKind window, int snr_idx) {
    cfg.validate();
    const SystemParams& pr = cfg.system;
    if (snr_idx < 0 || snr_idx >= static_cast<int>(pr.snr_db.size()))
        throw ConfigError("simulate_uncoded_point: snr_idx out of range");
    const Constellation c = build_constellation(pr.q);
    const RMat walsh = walsh_matrix(pr.n);
    const WindowDiagonal g = sample_window(window, pr.m);
    const int frame_bits = pr.mn() * c.bits_per_symbol;
    const Real n0 = n0_from_snr_db(pr.snr_db[static_cast<std::size_t>(snr_idx)]);

    // Constructed up front so infeasible search spaces are rejected before
    // any trial runs.
    std::optional<MldDetector> detector;
    if (cfg.detector == DetectorKind::Mld) detector.emplace(c, pr.mn());

    BerPoint pt;
    pt.snr_db = pr.snr_db[static_cast<std::size_t>(snr_idx)];
    pt.n0 = n0;
    run_batches(cfg, pt, [&](std::uint64_t t) -> Tally {
        RngEngine rng = make_engine(cfg.seed, kUncodedTag, static_cast<std::uint64_t>(snr_idx), t);
        const ChannelRealization ch = draw_channel(pr, rng);
        const PhnRealization phn = draw_phn(pr, rng);
        const Bits tx_bits = draw_bits(rng, static_cast<std::size_t>(frame_bits));
        const TxSignal tx = modulate(map_frame(tx_bits, c, pr), walsh, g);
        const CVec r = propagate(tx, ch, phn, n0, rng);
        const CVec y = demodulate(r, walsh, g);
        const CMat h = effective_channel(ch, csi_phn(phn, cfg.detector_csi), g, g, walsh).h;
        Bits rx_bits;
        if (detector) rx_bits = demap_hard(detector->detect(y, h).x, c);
        else rx_bits = hard_bits(lmmse(y, h, n0, c).llrs);
        Tally tally;
        tally.bits = static_cast<std::uint64_t>(frame_bits);
        tally.errors = bit_mismatches(tx_bits, rx_bits);
        return tally;
    });
    return pt;
}

LdpcCode coded_run_code(const ExperimentConfig& cfg) {
    return ldpc_construct(cfg.codeword_len, 0.5, derive_seed(cfg.seed, kCodeTag));
}

Interleaver coded_run_interleaver(const ExperimentConfig& cfg, const LdpcCode& code) {
    return Interleaver(code.n, derive_seed(cfg.seed, kInterleaverTag));
}

BerPoint simulate_coded_point(const ExperimentConfig& cfg, WindowKind window, Real sigma2,
                              int snr_idx, const LdpcCode& code, const Interleaver& il) {
    cfg.validate();
    const SystemParams& pr = cfg.system;
    if (snr_idx < 0 || snr_idx >= static_cast<int>(pr.snr_db.size()))
        throw ConfigError("simulate_coded_point: snr_idx out of range");
    SystemParams noisy = pr;
    noisy.sigma2_phn = sigma2;
    const Real sigma_rad = noisy.phn_sigma_rad();
    const Constellation c = build_constellation(pr.q);
    const RMat walsh = walsh_matrix(pr.n);
    const WindowDiagonal g = sample_window(window, pr.m);
    const int frame_bits = pr.mn() * c.bits_per_symbol;
    const int n_frames = (code.n + frame_bits - 1) / frame_bits;
    const Real n0 = n0_from_snr_db(pr.snr_db[static_cast<std::size_t>(snr_idx)]);

    BerPoint pt;
    pt.snr_db = pr.snr_db[static_cast<std::size_t>(snr_idx)];
    pt.n0 = n0;
    run_batches(cfg, pt, [&](std::uint64_t t) -> Tally {
        RngEngine rng = make_engine(cfg.seed, kCodedTag, static_cast<std::uint64_t>(snr_idx), t);
        const Bits message = draw_bits(rng, static_cast<std::size_t>(code.message_len));
        Bits stream = il.interleave(code.encode(message));
        stream.resize(static_cast<std::size_t>(n_frames) * frame_bits, 0);
        std::vector<CVec> ys(n_frames);
        std::vector<CMat> hs(n_frames);
        for (int f = 0; f < n_frames; ++f) {
            const ChannelRealization ch = draw_channel(pr, rng);
            const PhnRealization phn =
                draw_phn(sigma_rad, pr.mn(), pr.theta0_mode, pr.theta0_fixed_rad(), rng);
            const Bits chunk(stream.begin() + static_cast<std::ptrdiff_t>(f) * frame_bits,
                             stream.begin() + static_cast<std::ptrdiff_t>(f + 1) * frame_bits);
            const TxSignal tx = modulate(map_frame(chunk, c, pr), walsh, g);
            const CVec r = propagate(tx, ch, phn, n0, rng);
            ys[f] = demodulate(r, walsh, g);
            hs[f] = effective_channel(ch, csi_phn(phn, cfg.detector_csi), g, g, walsh).h;
        }
        const TurboResult res = turbo_loop(ys, hs, n0, code, il, c, cfg.t_det, cfg.t_ldpc);
        Tally tally;
        tally.bits = static_cast<std::uint64_t>(code.message_len);
        tally.errors = bit_mismatches(message, res.message);
        return tally;
    });
    return pt;
}

BerCurve simulate_uncoded_ber(const ExperimentConfig& cfg, WindowKind window) {
    BerCurve curve;
    curve.window = window;
    for (int s = 0; s < static_cast<int>(cfg.system.snr_db.size()); ++s)
        curve.points.push_back(simulate_uncoded_point(cfg, window, s));
    return curve;
}

BerCurve simulate_coded_ber(const ExperimentConfig& cfg, WindowKind window, Real sigma2) {
    const LdpcCode code = coded_run_code(cfg);
    const Interleaver il = coded_run_interleaver(cfg, code);
    BerCurve curve;
    curve.window = window;
    for (int s = 0; s < static_cast<int>(cfg.system.snr_db.size()); ++s)
        curve.points.push_back(simulate_coded_point(cfg, window, sigma2, s, code, il));
    return curve;
}

}  // namespace otsm
