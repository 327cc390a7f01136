#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fpg/mesh.hpp"

namespace fpg {

/// Settings of one solver invocation. Serialized as flat "key = value" lines; '#' starts a
/// comment. Unknown keys are rejected.
struct RunConfig {
  std::string problem = "paper-ex2";
  double eps = 1e-7;
  double theta = 0.5;
  double marking_fraction = 0.5;
  std::size_t max_dof = 20000;
  double rtol_linear = 1e-10;
  MeshKind mesh{};
  std::string out = "fpg_out";
  std::size_t max_outer = 100000;
  double h_min = 0.0;
  /// "adaptive" (Doerfler marking) or "uniform".
  std::string refinement = "adaptive";
  /// "auto", "hat" (1 at the centre vertex) or "zero". auto = hat for paper-ex2, else zero.
  std::string initial = "auto";
  /// Values visited by the sweep command.
  std::vector<double> eps_list{1.0, 1e-2, 1e-4, 1e-6, 1e-8};
  /// Record wall-clock time per step (makes records.csv non-reproducible).
  bool timing = false;

  bool operator==(const RunConfig&) const = default;
};

std::string emit_config(const RunConfig& config);

/// Parses over a copy of base, so absent keys keep base's values.
/// Throws std::invalid_argument with the offending line on error.
RunConfig parse_config(std::string_view text, const RunConfig& base = {});

RunConfig load_config(const std::string& path, const RunConfig& base = {});

/// Applies one key/value pair (same keys as the file format).
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace fpg
