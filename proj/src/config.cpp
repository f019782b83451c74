#include "crossdiff/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "crossdiff/errors.hpp"
#include "crossdiff/format.hpp"

namespace crossdiff {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double x = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw ArgumentError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  return x;
}

int parse_int(std::string_view key, std::string_view text) {
  int x = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw ArgumentError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  return x;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ArgumentError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(parse_double(key, item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

bool is_scenario_key(std::string_view key) { return key == "scenario" || key == "preset"; }

void apply_entry(RunConfig& cfg, std::string_view key, std::string_view value) {
  if (is_scenario_key(key)) return;  // handled before any other entry
  if (const auto field = param_field(key)) {
    cfg.params.*(*field) = parse_double(key, value);
    return;
  }
  if (key == "ic") {
    if (value == "equilibrium") {
      cfg.ic_equilibrium = true;
    } else {
      cfg.ic_equilibrium = false;
      cfg.ic_variant = parse_int(key, value);
      if (cfg.ic_variant < 1 || cfg.ic_variant > 3) throw ArgumentError("ic must be 1, 2, 3 or equilibrium, got " + std::string(value));
    }
  } else if (key == "dims") {
    cfg.dims = parse_int(key, value);
  } else if (key == "dx") {
    cfg.dx = parse_double(key, value);
  } else if (key == "dt") {
    cfg.dt = parse_double(key, value);
  } else if (key == "t_end") {
    cfg.t_end = parse_double(key, value);
  } else if (key == "snapshots") {
    cfg.snapshot_times = parse_list(key, value);
  } else if (key == "snapshot_every") {
    cfg.snapshot_every = parse_double(key, value);
  } else if (key == "negativity") {
    if (value == "abort")
      cfg.negativity = NegativityPolicy::Abort;
    else if (value == "warn")
      cfg.negativity = NegativityPolicy::Warn;
    else
      throw ArgumentError("negativity: expected abort or warn, got '" + std::string(value) + "'");
  } else if (key == "workers") {
    cfg.workers = parse_int(key, value);
  } else if (key == "probe_x") {
    cfg.probe_x = parse_double(key, value);
  } else if (key == "probe_y") {
    cfg.probe_y = parse_double(key, value);
  } else if (key == "fields") {
    if (value == "all")
      cfg.field_output = FieldOutput::All;
    else if (value == "final")
      cfg.field_output = FieldOutput::Final;
    else if (value == "none")
      cfg.field_output = FieldOutput::None;
    else
      throw ArgumentError("fields: expected all, final or none, got '" + std::string(value) + "'");
  } else if (key == "png") {
    cfg.png = parse_bool(key, value);
  } else {
    throw ArgumentError("unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

KeyValues parse_key_values(std::string_view text, std::string_view source) {
  KeyValues out;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto where = [&] { return std::string(source) + ":" + std::to_string(line_no) + ": "; };
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ArgumentError(where() + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ArgumentError(where() + "empty key");
    if (!seen.insert(std::string(key)).second) throw ArgumentError(where() + "repeated key '" + std::string(key) + "'");
    out.emplace_back(key, value);
  }
  return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str(), path.string());
}

ModelParams apply_params(ModelParams base, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    const auto field = param_field(key);
    if (!field) throw ArgumentError("unknown parameter '" + key + "'");
    base.*(*field) = parse_double(key, value);
  }
  return base;
}

ModelParams load_params(const std::filesystem::path& path) {
  KeyValues kv = read_key_values(path);
  ModelParams base = kirschner_table1();
  const auto it = std::find_if(kv.begin(), kv.end(), [](const auto& e) { return is_scenario_key(e.first); });
  if (it != kv.end()) {
    base = preset(it->second);
    kv.erase(it);
  }
  return apply_params(base, kv);
}

const std::vector<std::string_view>& solver_keys() {
  static const std::vector<std::string_view> keys{"scenario", "ic",        "dims",    "dx",     "dt",
                                                  "t_end",    "snapshots", "snapshot_every",     "negativity",
                                                  "workers",  "probe_x",   "probe_y", "fields", "png"};
  return keys;
}

std::vector<double> RunConfig::all_snapshot_times() const {
  std::vector<double> times = snapshot_times;
  if (snapshot_every > 0.0) {
    const auto n = static_cast<long long>(std::floor(t_end / snapshot_every + 1e-9));
    for (long long k = 0; k <= n; ++k) times.push_back(std::min(t_end, static_cast<double>(k) * snapshot_every));
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

SimConfig RunConfig::sim_config() const {
  SimConfig s;
  s.params = params;
  s.ic_variant = ic_variant;
  s.dims = dims;
  s.dx = dx;
  s.dt = dt;
  s.t_end = t_end;
  s.snapshot_times = all_snapshot_times();
  s.negativity = negativity;
  s.workers = workers;
  return s;
}

RunConfig resolve_run_config(const KeyValues& file, const KeyValues& flags) {
  auto scenario_of = [](const KeyValues& kv) -> std::optional<std::string> {
    for (const auto& [k, v] : kv)
      if (is_scenario_key(k)) return v;
    return std::nullopt;
  };
  RunConfig cfg;
  cfg.scenario = scenario_of(flags).value_or(scenario_of(file).value_or("untreated"));
  cfg.params = preset(cfg.scenario);
  for (const auto& [k, v] : file) apply_entry(cfg, k, v);
  for (const auto& [k, v] : flags) apply_entry(cfg, k, v);
  if (cfg.snapshot_every < 0.0) throw ArgumentError("snapshot_every must be nonnegative");
  return cfg;
}

std::string to_key_values(const RunConfig& cfg) {
  std::ostringstream o;
  o << "scenario = " << cfg.scenario << '\n';
  for (const auto& [name, member] : kParamFields) o << name << " = " << fmt(cfg.params.*member) << '\n';
  o << "ic = " << (cfg.ic_equilibrium ? std::string("equilibrium") : std::to_string(cfg.ic_variant)) << '\n'
    << "dims = " << cfg.dims << '\n'
    << "dx = " << fmt(cfg.dx) << '\n'
    << "dt = " << fmt(cfg.dt) << '\n'
    << "t_end = " << fmt(cfg.t_end) << '\n'
    << "snapshots = ";
  for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) o << (i ? "," : "") << fmt(cfg.snapshot_times[i]);
  o << '\n'
    << "snapshot_every = " << fmt(cfg.snapshot_every) << '\n'
    << "negativity = " << (cfg.negativity == NegativityPolicy::Abort ? "abort" : "warn") << '\n'
    << "workers = " << cfg.workers << '\n'
    << "probe_x = " << fmt(cfg.probe_x) << '\n'
    << "probe_y = " << fmt(cfg.probe_y) << '\n'
    << "fields = "
    << (cfg.field_output == FieldOutput::All ? "all" : (cfg.field_output == FieldOutput::Final ? "final" : "none"))
    << '\n'
    << "png = " << (cfg.png ? "true" : "false") << '\n';
  return o.str();
}

}  // namespace crossdiff
