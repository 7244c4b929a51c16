// Experiment configuration: file format, command-line overrides, canonical
// serialization for output provenance, and a content hash.
#pragma once

#include "otsm/analysis.hpp"
#include "otsm/params.hpp"
#include "otsm/windows.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace otsm {

enum class DetectorKind { Mld, Lmmse };

/// Channel knowledge granted to the detector: Full includes the oscillator
/// phase trajectory; PhnBlind builds the detection matrix from the initial
/// phase only, so the drift acts as unmodelled interference.
enum class DetectorCsi { Full, PhnBlind };

struct ExperimentConfig {
    SystemParams system;
    std::vector<WindowKind> windows = {WindowKind::Rectangular};
    DetectorKind detector = DetectorKind::Mld;
    DetectorCsi detector_csi = DetectorCsi::Full;

    std::uint64_t seed = 1;
    std::string out_dir = "results";
    int threads = 1;
    int target_errors = 200;
    std::uint64_t max_trials = 1000000;

    BoundMode bound_mode = BoundMode::Exact;
    int bound_realizations = 50;
    int bound_samples = 2000;

    bool coding = false;
    int codeword_len = 256;
    int t_det = 8;
    int t_ldpc = 6;
    std::vector<Real> sigma2_list;  // coded sweep; empty = just system.sigma2_phn

    int oversample = 8;
    int segment_len = 4096;
    Real overlap = 0.5;
    int n_avg = 200;
    std::vector<Real> oobe_offsets = {1.5, 2.0};

    void validate() const;
};

/// Parses the key = value format with [system], [run], [bound], [coding],
/// and [psd] sections. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Applies one "section.key=value" override on top of a parsed config.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Canonical round-trippable serialization: every key in a fixed order.
std::string dump_config(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Stable shortest-ish decimal formatting used by all writers.
std::string format_real(Real v);

}  // namespace otsm
