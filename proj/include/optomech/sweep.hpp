#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optomech/entanglement.hpp"
#include "optomech/model.hpp"

namespace optomech {

inline constexpr const char* kToolVersion = "0.1.0";

enum class SweepMode {
  tangle_map,
  negativity_map,
  marker_map,
  kc_curve,
  mutual_info,
  density_dump,
  demo_qubit,
  scaling_check
};

std::string_view to_string(SweepMode mode);
SweepMode parse_mode(std::string_view name);  // ConfigError on unknown names

/// Parses "pi", "2pi", "pi/2", "3*pi/4", "-pi" or a plain number.
double parse_angle(std::string_view text);

/// Values of one grid axis, in execution order.
struct GridAxis {
  std::string name;
  std::vector<double> values;
};

/// Axis specification accepted in configs:
///   1.5                                      single value
///   [0.5, 1, 2]                              explicit list
///   {"start": 0, "stop": 2, "count": 64,     inclusive grid; "log" for
///    "log": false, "exclude": "start"}       log spacing, "exclude" drops
///                                            "start", "stop" or "both" ends
/// Angles may be written as strings ("pi/2").
GridAxis parse_axis(const std::string& name, const nlohmann::json& spec);

struct SweepConfig {
  SweepMode mode = SweepMode::tangle_map;
  /// Axes in row order: rows are lexicographic over this sequence.
  std::vector<GridAxis> axes;
  SubspaceSelector subspace;
  std::optional<Truncation> truncation;
  double mirror_freq = 1.0;
  std::string output;
  unsigned workers = 1;
  /// Normalized config as parsed (output and workers removed); echoed into
  /// the CSV metadata block.
  nlohmann::json echo;

  static SweepConfig from_json(const nlohmann::json& doc);
  static SweepConfig from_file(const std::string& path);

  const GridAxis& axis(std::string_view name) const;
  std::size_t cardinality() const;
};

struct SweepResult {
  SweepMode mode = SweepMode::tangle_map;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // formatted cells
  std::size_t error_rows = 0;
  std::optional<nlohmann::json> document;      // density-dump output
  nlohmann::json echo;
  double wall_seconds = 0.0;
  unsigned workers = 1;
};

/// Shortest round-trip decimal form.
std::string format_number(double value);

SweepResult run_sweep(const SweepConfig& config);

/// Metadata comment block, header row and rows. Contains nothing that
/// depends on the worker count or the clock.
void write_csv(const SweepResult& result, std::ostream& out);
/// Run facts that are not reproducible (wall time, workers).
nlohmann::json sidecar(const SweepResult& result, const std::string& output);

/// Writes the CSV (or JSON document) to config.output and the sidecar to
/// config.output + ".meta.json".
void write_outputs(const SweepResult& result, const std::string& output);

}  // namespace optomech
