// Result persistence: CSV builders with an embedded provenance block
// (config hash, seed, full canonical config) and append/resume bookkeeping
// for long coded sweeps. Builders return strings so they can be checked
// without touching the filesystem.
#pragma once

#include "otsm/analysis.hpp"
#include "otsm/config.hpp"
#include "otsm/montecarlo.hpp"
#include "otsm/spectral.hpp"

#include <string>
#include <utility>
#include <vector>

namespace otsm {

/// "# config_hash=..." / "# seed=..." followed by the canonical config,
/// every line comment-prefixed.
std::string provenance_header(const ExperimentConfig& cfg);

std::string ber_csv_prefix(const ExperimentConfig& cfg, WindowKind window);
std::string coded_ber_csv_prefix(const ExperimentConfig& cfg, WindowKind window, Real sigma2);
std::string ber_csv_row(const BerPoint& pt);
std::string ber_csv(const ExperimentConfig& cfg, const BerCurve& curve);

std::string bound_csv(const ExperimentConfig& cfg, const BoundReport& report);

std::string psd_csv(const ExperimentConfig& cfg, WindowKind window, const PsdEstimate& psd);

/// One row per window and offset with the level difference against the
/// rectangular reference at the same offset.
std::string oobe_text(const ExperimentConfig& cfg,
                      const std::vector<std::pair<WindowKind, OobeReport>>& reports,
                      const OobeReport& rect_ref);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);  // empty string when absent

/// How many complete data rows of a previous run can be kept. Returns -1
/// when the file is absent or was produced by a different config, in which
/// case the caller starts fresh. Otherwise the file is truncated to the
/// prefix plus the surviving rows (dropping a torn trailing line) and the
/// row count is returned.
int resume_point_count(const std::string& path, const std::string& expected_prefix);

void append_text_file(const std::string& path, const std::string& content);

}  // namespace otsm
