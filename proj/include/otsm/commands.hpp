// Experiment orchestration behind the command-line subcommands: each command
// validates its configuration, runs the experiment for every requested
// window, and persists CSVs with full provenance. Wall times go to stdout
// and a run log, never into the data files, so reruns stay byte-identical.
#pragma once

#include "otsm/config.hpp"

#include <string>

namespace otsm {

int cmd_ber(const ExperimentConfig& cfg);
int cmd_bound(const ExperimentConfig& cfg);
int cmd_psd(const ExperimentConfig& cfg);
int cmd_coded_ber(const ExperimentConfig& cfg);

/// Fast built-in checks of the signal chain; prints one line per check.
int cmd_selftest();

/// "<out_dir>/<name>"; creates out_dir on first use.
std::string result_path(const ExperimentConfig& cfg, const std::string& name);

}  // namespace otsm
