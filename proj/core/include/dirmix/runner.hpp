#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirmix/config.hpp"
#include "dirmix/report.hpp"

namespace dirmix {

std::string tool_version();

struct RunManifest {
  struct File {
    std::string path;  // relative to the output directory
    std::string sha256;
  };
  struct ReportSummary {
    std::string file;
    std::size_t rows = 0;
    std::vector<bool> row_exact;
  };

  std::string verb;
  std::string config_hash;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<File> files;
  std::vector<ReportSummary> reports;
  /// Verb-specific outcome (final values, verdicts, certificates).
  nlohmann::json summary = nlohmann::json::object();

  /// Everything except "timing" is a pure function of the config and version.
  nlohmann::json to_json() const;
};

/// Keeps rows whose index is a multiple of `stride`, plus the last row.
ConvergenceReport thin_report(const ConvergenceReport& report, std::int64_t stride);

/// Executes cfg.verb, writes every report under cfg.out_dir together with
/// manifest.json, and returns the manifest. Errors propagate as dirmix::Error.
RunManifest run(const ExperimentConfig& cfg);

}  // namespace dirmix
