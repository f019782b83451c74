#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crossdiff/kinetics.hpp"
#include "crossdiff/pde.hpp"

namespace crossdiff {

/// Ordered key=value pairs as read from a file or collected from flags.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// One `key = value` per line; '#' starts a comment; blank lines are skipped.
/// Throws ArgumentError (with `source` and line number) on a line without '=',
/// an empty key or a repeated key.
KeyValues parse_key_values(std::string_view text, std::string_view source = "<string>");

KeyValues read_key_values(const std::filesystem::path& path);

/// Applies parameter keys to `base`. Any key that is not a model parameter is an error.
ModelParams apply_params(ModelParams base, const KeyValues& kv);

/// Parameter preset file: `preset = <name>` (optional) plus parameter keys.
ModelParams load_params(const std::filesystem::path& path);

enum class FieldOutput { All, Final, None };

/// Everything a simulate run needs, resolved from preset, config file and flags.
struct RunConfig {
  std::string scenario = "untreated";
  ModelParams params = preset("untreated");
  int ic_variant = 1;
  bool ic_equilibrium = false;  ///< homogeneous start at the coexistence equilibrium
  int dims = 2;
  double dx = 0.01;
  double dt = 1e-3;
  double t_end = 200.0;
  std::vector<double> snapshot_times;
  double snapshot_every = 0.0;  ///< 0: no periodic snapshots
  NegativityPolicy negativity = NegativityPolicy::Abort;
  int workers = 1;
  double probe_x = 0.5;
  double probe_y = 0.5;
  FieldOutput field_output = FieldOutput::All;
  bool png = true;

  /// Snapshot list for the solver: explicit times merged with the periodic ones.
  std::vector<double> all_snapshot_times() const;
  SimConfig sim_config() const;
};

/// Keys accepted besides the model parameters.
const std::vector<std::string_view>& solver_keys();

/// Precedence flag > file > preset: the scenario is taken from the flags, else the
/// file, else "untreated"; then file entries are applied, then flag entries.
/// Throws ArgumentError on unknown keys or malformed values.
RunConfig resolve_run_config(const KeyValues& file, const KeyValues& flags);

/// Resolved configuration as key=value lines, readable by resolve_run_config.
std::string to_key_values(const RunConfig& cfg);

}  // namespace crossdiff
