#include "otsm/commands.hpp"

#include "otsm/detectors.hpp"
#include "otsm/modem.hpp"
#include "otsm/montecarlo.hpp"
#include "otsm/reports.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

namespace otsm {

namespace {

constexpr std::uint64_t kPsdStreamTag = 0x95d;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void log_line(const ExperimentConfig& cfg, const std::string& line) {
    append_text_file(result_path(cfg, "run_log.txt"), line + "\n");
}

std::string point_summary(const char* cmd, WindowKind w, const BerPoint& pt, double secs) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s %s snr=%g ber=%.4g errors=%llu trials=%llu seconds=%.2f", cmd,
                  window_name(w), pt.snr_db, pt.ber,
                  static_cast<unsigned long long>(pt.errors),
                  static_cast<unsigned long long>(pt.trials), secs);
    return buf;
}

}  // namespace

std::string result_path(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return cfg.out_dir + "/" + name;
}

int cmd_ber(const ExperimentConfig& cfg) {
    cfg.validate();
    for (WindowKind w : cfg.windows) {
        BerCurve curve;
        curve.window = w;
        for (int s = 0; s < static_cast<int>(cfg.system.snr_db.size()); ++s) {
            const auto t0 = Clock::now();
            curve.points.push_back(simulate_uncoded_point(cfg, w, s));
            const std::string line = point_summary("ber", w, curve.points.back(), seconds_since(t0));
            std::printf("%s\n", line.c_str());
            log_line(cfg, line);
        }
        const std::string path = result_path(cfg, "ber_" + std::string(window_name(w)) + ".csv");
        write_text_file(path, ber_csv(cfg, curve));
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

int cmd_bound(const ExperimentConfig& cfg) {
    cfg.validate();
    const Constellation c = build_constellation(cfg.system.q);
    for (WindowKind w : cfg.windows) {
        const auto t0 = Clock::now();
        const BoundReport report =
            union_bound(cfg.system, c, w, cfg.system.snr_db, cfg.bound_realizations,
                        cfg.bound_mode, cfg.seed, cfg.bound_samples);
        const std::string path = result_path(cfg, "bound_" + std::string(window_name(w)) + ".csv");
        write_text_file(path, bound_csv(cfg, report));
        char buf[120];
        std::snprintf(buf, sizeof(buf), "bound %s points=%zu seconds=%.2f", window_name(w),
                      report.points.size(), seconds_since(t0));
        std::printf("%s\n", buf);
        log_line(cfg, buf);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

int cmd_psd(const ExperimentConfig& cfg) {
    cfg.validate();
    const SystemParams& pr = cfg.system;
    const long hop = std::lround(cfg.segment_len * (1.0 - cfg.overlap));
    const long needed = cfg.segment_len + (static_cast<long>(cfg.n_avg) - 1) * hop;
    const long per_frame = static_cast<long>(cfg.oversample) * pr.mn();
    const int n_frames = static_cast<int>((needed + per_frame - 1) / per_frame);

    // The same engine seed for every window: identical frame sequences, so
    // level differences between windows are free of frame-draw variance.
    auto stream_psd = [&](WindowKind w) {
        RngEngine rng = make_engine(cfg.seed, kPsdStreamTag);
        const CVec stream = synthesize_oversampled(pr, w, cfg.oversample, n_frames, rng);
        return estimate_npsd(stream, cfg.segment_len, cfg.overlap, cfg.n_avg);
    };
    const auto [band_lo, band_hi] = occupied_band(pr, cfg.oversample);

    std::vector<std::pair<WindowKind, OobeReport>> reports;
    bool have_rect = false;
    OobeReport rect_ref;
    for (WindowKind w : cfg.windows) {
        const auto t0 = Clock::now();
        const PsdEstimate psd = stream_psd(w);
        const OobeReport rep = oobe_report(psd, band_lo, band_hi, cfg.oobe_offsets);
        if (w == WindowKind::Rectangular && !have_rect) {
            rect_ref = rep;
            have_rect = true;
        }
        reports.emplace_back(w, rep);
        const std::string path = result_path(cfg, "psd_" + std::string(window_name(w)) + ".csv");
        write_text_file(path, psd_csv(cfg, w, psd));
        char buf[120];
        std::snprintf(buf, sizeof(buf), "psd %s frames=%d seconds=%.2f", window_name(w), n_frames,
                      seconds_since(t0));
        std::printf("%s\n", buf);
        log_line(cfg, buf);
        std::printf("wrote %s\n", path.c_str());
    }
    if (!have_rect)
        rect_ref = oobe_report(stream_psd(WindowKind::Rectangular), band_lo, band_hi,
                               cfg.oobe_offsets);
    const std::string path = result_path(cfg, "oobe.txt");
    write_text_file(path, oobe_text(cfg, reports, rect_ref));
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int cmd_coded_ber(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!cfg.coding) throw ConfigError("coded-ber requires coding.enabled = true");
    const LdpcCode code = coded_run_code(cfg);
    const Interleaver il = coded_run_interleaver(cfg, code);
    std::vector<Real> sigmas = cfg.sigma2_list;
    if (sigmas.empty()) sigmas.push_back(cfg.system.sigma2_phn);
    for (WindowKind w : cfg.windows) {
        for (Real sigma2 : sigmas) {
            const std::string path = result_path(
                cfg, "coded_ber_" + std::string(window_name(w)) + "_s" + format_real(sigma2) +
                         ".csv");
            const std::string prefix = coded_ber_csv_prefix(cfg, w, sigma2);
            int done = resume_point_count(path, prefix);
            if (done < 0) {
                write_text_file(path, prefix);
                done = 0;
            } else if (done > 0) {
                std::printf("resuming %s after %d completed point(s)\n", path.c_str(), done);
            }
            for (int s = done; s < static_cast<int>(cfg.system.snr_db.size()); ++s) {
                const auto t0 = Clock::now();
                const BerPoint pt = simulate_coded_point(cfg, w, sigma2, s, code, il);
                append_text_file(path, ber_csv_row(pt));
                const std::string line =
                    point_summary("coded-ber", w, pt, seconds_since(t0)) +
                    " sigma2=" + format_real(sigma2);
                std::printf("%s\n", line.c_str());
                log_line(cfg, line);
            }
            std::printf("wrote %s\n", path.c_str());
        }
    }
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    const auto check = [&failures](bool ok, const char* what) {
        std::printf("selftest: %s %s\n", ok ? "ok  " : "FAIL", what);
        if (!ok) ++failures;
    };
    try {
        const RMat w16 = walsh_matrix(16);
        check((w16 * w16 - RMat::Identity(16, 16)).norm() < 1e-12,
              "sequency transform is an involution");

        const WindowDiagonal rect = sample_window(WindowKind::Rectangular, 8);
        check((rect.g.array() == 1.0).all(), "rectangular window samples to ones");
        check(std::abs(eval_window(WindowKind::Hamming, 0.0, 1.0) - 0.08) < 1e-15,
              "raised-cosine edge value");

        SystemParams pr;
        RngEngine rng = make_engine(7, 1);
        const Constellation c = build_constellation(pr.q);
        const RMat walsh = walsh_matrix(pr.n);
        const WindowDiagonal g = sample_window(WindowKind::Hamming, pr.m);
        const ChannelRealization ch = draw_channel(pr, rng);
        const PhnRealization phn = draw_phn(pr, rng);
        const DsFrame frame = random_frame(c, pr, rng);
        const CVec r = propagate(modulate(frame, walsh, g), ch, phn, 0.0, rng);
        const CVec y = demodulate(r, walsh, g);
        const CMat h = effective_channel(ch, phn, g, g, walsh).h;
        const MldResult det = MldDetector(c, pr.mn()).detect(y, h);
        check(demap_hard(det.x, c) == demap_frame(frame, c),
              "noise-free frame detected exactly");

        const LdpcCode code = ldpc_construct(64, 0.5, 3);
        const Bits msg = draw_bits(rng, static_cast<std::size_t>(code.message_len));
        const Bits cw = code.encode(msg);
        RVec llrs(code.n);
        for (int i = 0; i < code.n; ++i) llrs(i) = cw[static_cast<std::size_t>(i)] ? -5.0 : 5.0;
        const DecodeResult dec = spa_decode(llrs, code, 10);
        check(code.parity_ok(cw) && dec.bits == cw, "clean codeword decodes to itself");

        CVec tone(512);
        for (int t = 0; t < 512; ++t)
            tone(t) = std::polar(1.0, 2.0 * static_cast<Real>(EIGEN_PI) * 0.25 * t);
        const PsdEstimate psd = estimate_npsd(tone, 64, 0.5, 3);
        Eigen::Index peak;
        psd.npsd_db.maxCoeff(&peak);
        check(std::abs(psd.freq(peak) - 0.25) < 1e-12, "estimator locates a pure tone");

        const BoundReport rep = union_bound(pr, c, WindowKind::Rectangular, {6.0, 12.0}, 2,
                                            BoundMode::Exact, 5);
        check(rep.points[0].bound > rep.points[1].bound && rep.points[1].bound > 0.0,
              "pairwise error bound falls with snr");
    } catch (const std::exception& e) {
        std::printf("selftest: FAIL exception: %s\n", e.what());
        return 1;
    }
    if (failures) {
        std::printf("selftest: %d check(s) failed\n", failures);
        return 1;
    }
    std::printf("selftest: all checks passed\n");
    return 0;
}

}  // namespace otsm
