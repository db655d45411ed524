#pragma once

#include "pspec/config.hpp"
#include "pspec/report.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace pspec {

/// Everything a command produces, held in memory until the end of the run.
struct RunOutput {
  Report report;
  /// File name (relative to the output directory) to contents.
  std::map<std::string, std::string> files;
  /// Text for standard output.
  std::string summary;
};

/// Runs the configured command without touching the disk (except reading
/// input meshes and fields). Throws on runtime errors.
RunOutput execute(const RunConfig& cfg);

/// execute, then write report.json and all artifacts into cfg.out_dir.
/// Returns 0 when every check passes, 1 on a failed check, 2 on an error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace pspec
