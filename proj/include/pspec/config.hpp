#pragma once

#include "pspec/spectral.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pspec {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshSpec {
  /// icosphere | ellipsoid | circle | interval | file
  std::string kind = "icosphere";
  int level = 4;
  double aspect = 1.0;
  bool normalize = true;
  int segments = 400;
  double length = 1.0;
  std::string path;
};

struct RunConfig {
  /// mesh | eigen | symmetrize | verify | sweep | oracle
  std::string command;
  MeshSpec mesh;
  /// closed | dirichlet; dirichlet problems on surfaces use {z > threshold}.
  std::string problem = "closed";
  double domain_threshold = 0.0;
  std::vector<double> p{2.0};
  SolverSettings solver;
  /// z | eigen | random | bump | a CSV path (symmetrize command).
  std::string field = "z";
  std::vector<double> aspects{1.0, 1.05, 1.1, 1.15, 1.2};
  int oracle_n = 2;
  /// hemisphere | interval
  std::string oracle_problem = "hemisphere";
  int smooth_fields = 20;
  int bump_fields = 100;
  int gromov_fields = 50;
  int croke_fields = 50;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys, malformed
/// lines, and out-of-range values are errors carrying the line number.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

/// Every key with its resolved value, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

}  // namespace pspec
