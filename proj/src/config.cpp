#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "hynls/errors.hpp"
#include "hynls/experiments.hpp"
#include "hynls/scenarios.hpp"

namespace hynls {

namespace fs = std::filesystem;

namespace {

using Items = std::map<std::string, std::vector<std::string>>;

const std::vector<std::string>& schema_keys() {
  static const std::vector<std::string> keys{
      "schema_version",      "name",          "mode",          "grid.n",          "grid.periods",
      "physics.alpha",       "physics.sign",  "physics.eps",   "physics.experimental",
      "time.dt",             "time.T",        "w0.kind",       "w0.amplitude",    "w0.mode",
      "w0.width",            "w0.teeth_per_period",            "w0.modes",        "w0.re",
      "w0.im",               "v0.kind",       "v0.amplitude",  "v0.center",       "v0.width",
      "v0.velocity",         "v0.first_slot", "v0.count",      "v0.scale",        "v0.samples_file",
      "run.seed",            "run.snapshot_every",             "run.safety_C",
      "diagnostics.window_centers",           "diagnostics.window_half_width",
      "convergence.levels",  "convergence.reference_factor",   "output.dir"};
  return keys;
}

void read_into(const fs::path& path, Items& items, std::set<fs::path>& seen) {
  const fs::path canon = fs::weakly_canonical(path);
  if (!seen.insert(canon).second) throw ConfigError("cyclic extends at " + path.string());
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  std::vector<CLI::ConfigItem> raw;
  try {
    raw = CLI::ConfigTOML().from_file(path.string());
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  Items local;
  for (const auto& item : raw) {
    if (item.name == "++" || item.name == "--") continue;
    std::string key;
    for (const auto& p : item.parents) key += p + ".";
    key += item.name;
    if (local.count(key)) throw ConfigError("duplicate key " + key + " in " + path.string());
    local[key] = item.inputs;
  }
  if (auto it = local.find("extends"); it != local.end()) {
    if (it->second.size() != 1) throw ConfigError("extends takes one path");
    fs::path base = it->second.front();
    if (base.is_relative()) base = path.parent_path() / base;
    read_into(base, items, seen);
    local.erase(it);
  }
  // Relative sample files resolve against the file that names them.
  if (auto it = local.find("v0.samples_file"); it != local.end() && it->second.size() == 1) {
    fs::path p = it->second.front();
    if (!p.empty() && p.is_relative()) it->second.front() = (path.parent_path() / p).lexically_normal().string();
  }
  for (auto& [k, v] : local) items[k] = v;
}

const std::vector<std::string>& need(const Items& items, const std::string& key) {
  auto it = items.find(key);
  if (it == items.end()) throw ConfigError("missing key " + key);
  return it->second;
}

std::string scalar(const Items& items, const std::string& key) {
  const auto& v = need(items, key);
  if (v.size() != 1) throw ConfigError("key " + key + " expects a single value");
  return v.front();
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not a number: " + s);
  }
}

long long to_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not an integer: " + s);
  }
}

double get_double(const Items& items, const std::string& key) { return to_double(key, scalar(items, key)); }
int get_int(const Items& items, const std::string& key) {
  return static_cast<int>(to_int(key, scalar(items, key)));
}

bool get_bool(const Items& items, const std::string& key) {
  const std::string s = scalar(items, key);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("key " + key + ": expected true or false");
}

std::vector<double> get_doubles(const Items& items, const std::string& key) {
  std::vector<double> out;
  for (const auto& s : need(items, key)) out.push_back(to_double(key, s));
  return out;
}

std::vector<int> get_ints(const Items& items, const std::string& key) {
  std::vector<int> out;
  for (const auto& s : need(items, key)) out.push_back(static_cast<int>(to_int(key, s)));
  return out;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  // Keep floats recognizable as floats.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, double>) {
      s += num(v[i]);
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s + "]";
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::map<std::string, std::vector<std::string>> read_config_items(const fs::path& path) {
  Items items;
  std::set<fs::path> seen;
  read_into(path, items, seen);
  return items;
}

ScenarioConfig load_scenario(const fs::path& path) {
  const Items items = read_config_items(path);
  const auto& keys = schema_keys();
  for (const auto& [k, v] : items) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key " + k);
  }
  ScenarioConfig c;
  c.schema_version = get_int(items, "schema_version");
  if (c.schema_version != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version));
  }
  c.name = scalar(items, "name");
  c.mode = scalar(items, "mode");
  c.n = get_int(items, "grid.n");
  c.periods = get_int(items, "grid.periods");
  c.alpha = get_double(items, "physics.alpha");
  const std::string sign = scalar(items, "physics.sign");
  if (sign == "focusing") {
    c.sign = Sign::focusing;
  } else if (sign == "defocusing") {
    c.sign = Sign::defocusing;
  } else {
    throw ConfigError("physics.sign must be focusing or defocusing");
  }
  c.eps = get_double(items, "physics.eps");
  c.experimental = get_bool(items, "physics.experimental");
  c.dt = get_double(items, "time.dt");
  c.T = get_double(items, "time.T");

  c.w0.kind = scalar(items, "w0.kind");
  c.w0.amplitude = get_double(items, "w0.amplitude");
  c.w0.mode = get_int(items, "w0.mode");
  c.w0.width = get_double(items, "w0.width");
  c.w0.teeth_per_period = get_int(items, "w0.teeth_per_period");
  c.w0.modes = get_ints(items, "w0.modes");
  c.w0.re = get_doubles(items, "w0.re");
  c.w0.im = get_doubles(items, "w0.im");

  c.v0.kind = scalar(items, "v0.kind");
  c.v0.amplitude = get_double(items, "v0.amplitude");
  c.v0.center = get_double(items, "v0.center");
  c.v0.width = get_double(items, "v0.width");
  c.v0.velocity = get_double(items, "v0.velocity");
  c.v0.first_slot = get_int(items, "v0.first_slot");
  c.v0.count = get_int(items, "v0.count");
  c.v0.scale = get_double(items, "v0.scale");
  const auto& sf = need(items, "v0.samples_file");
  c.v0.samples_file = sf.empty() ? "" : sf.front();

  const long long seed = to_int("run.seed", scalar(items, "run.seed"));
  if (seed < 0) throw ConfigError("run.seed must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.snapshot_every = get_int(items, "run.snapshot_every");
  c.safety_C = get_double(items, "run.safety_C");
  c.window_centers = get_doubles(items, "diagnostics.window_centers");
  c.window_half_width = get_double(items, "diagnostics.window_half_width");
  c.convergence_levels = get_int(items, "convergence.levels");
  c.convergence_reference_factor = get_int(items, "convergence.reference_factor");
  c.output_dir = scalar(items, "output.dir");
  c.validate();
  return c;
}

void ScenarioConfig::validate() const {
  if (mode != "hybrid" && mode != "torus") throw ConfigError("mode must be hybrid or torus");
  if (n < 8 || !is_power_of_two(n)) throw ConfigError("grid.n must be a power of two >= 8");
  if (periods < 1) throw ConfigError("grid.periods must be >= 1");
  if (!(alpha >= 1.0 && alpha <= 5.0)) throw ConfigError("physics.alpha must lie in [1, 5]");
  if (!(eps >= 0.0)) throw ConfigError("physics.eps must be >= 0");
  if (!(dt > 0.0) || !(T > 0.0)) throw ConfigError("time.dt and time.T must be positive");
  const double steps = T / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw ConfigError("time.T must be a multiple of time.dt");
  }
  static const std::set<std::string> w_kinds{"zero", "plane_wave", "tooth_train", "fourier"};
  static const std::set<std::string> v_kinds{"zero", "gaussian", "tooth_removal", "samples"};
  if (!w_kinds.count(w0.kind)) throw ConfigError("unknown w0.kind " + w0.kind);
  if (!v_kinds.count(v0.kind)) throw ConfigError("unknown v0.kind " + v0.kind);
  if (w0.kind == "tooth_train" && (!(w0.width > 0.0) || w0.teeth_per_period < 1)) {
    throw ConfigError("tooth_train needs width > 0 and teeth_per_period >= 1");
  }
  if (w0.kind == "fourier" && (w0.modes.size() != w0.re.size() || w0.modes.size() != w0.im.size())) {
    throw ConfigError("w0.modes, w0.re and w0.im must have equal length");
  }
  for (int m : w0.modes) {
    if (2 * std::abs(m) >= n) throw ConfigError("w0.modes outside the resolved band");
  }
  if (v0.kind == "gaussian" && !(v0.width > 0.0)) throw ConfigError("v0.width must be positive");
  if (mode == "hybrid" && v0.kind == "tooth_removal") {
    if (w0.kind != "tooth_train") throw ConfigError("tooth_removal needs w0.kind = tooth_train");
    if (v0.count < 0) throw ConfigError("v0.count must be >= 0");
  }
  if (v0.kind == "samples" && v0.samples_file.empty()) throw ConfigError("v0.samples_file is empty");
  if (snapshot_every < 1) throw ConfigError("run.snapshot_every must be >= 1");
  if (!(safety_C > 0.0)) throw ConfigError("run.safety_C must be positive");
  if (!window_centers.empty() &&
      !(window_half_width > 0.0 && window_half_width <= 0.5 * kTwoPi * (mode == "torus" ? 1 : periods))) {
    throw ConfigError("diagnostics.window_half_width must lie in (0, L/2]");
  }
  if (convergence_levels < 2) throw ConfigError("convergence.levels must be >= 2");
  if (!is_power_of_two(convergence_reference_factor) ||
      convergence_reference_factor <= (1 << (convergence_levels - 1))) {
    throw ConfigError("convergence.reference_factor must be a power of two above the finest level");
  }
  if (output_dir.empty()) throw ConfigError("output.dir is empty");
}

std::string to_toml(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "schema_version = " << c.schema_version << "\n";
  o << "name = " << quoted(c.name) << "\n";
  o << "mode = " << quoted(c.mode) << "\n\n";
  o << "[grid]\nn = " << c.n << "\nperiods = " << c.periods << "\n\n";
  o << "[physics]\nalpha = " << num(c.alpha) << "\nsign = "
    << quoted(c.sign == Sign::focusing ? "focusing" : "defocusing") << "\neps = " << num(c.eps)
    << "\nexperimental = " << (c.experimental ? "true" : "false") << "\n\n";
  o << "[time]\ndt = " << num(c.dt) << "\nT = " << num(c.T) << "\n\n";
  o << "[w0]\nkind = " << quoted(c.w0.kind) << "\namplitude = " << num(c.w0.amplitude)
    << "\nmode = " << c.w0.mode << "\nwidth = " << num(c.w0.width)
    << "\nteeth_per_period = " << c.w0.teeth_per_period << "\nmodes = " << list(c.w0.modes)
    << "\nre = " << list(c.w0.re) << "\nim = " << list(c.w0.im) << "\n\n";
  o << "[v0]\nkind = " << quoted(c.v0.kind) << "\namplitude = " << num(c.v0.amplitude)
    << "\ncenter = " << num(c.v0.center) << "\nwidth = " << num(c.v0.width)
    << "\nvelocity = " << num(c.v0.velocity) << "\nfirst_slot = " << c.v0.first_slot
    << "\ncount = " << c.v0.count << "\nscale = " << num(c.v0.scale) << "\nsamples_file = "
    << quoted(c.v0.samples_file.empty() ? "" : fs::absolute(c.v0.samples_file).string()) << "\n\n";
  o << "[run]\nseed = " << c.seed << "\nsnapshot_every = " << c.snapshot_every
    << "\nsafety_C = " << num(c.safety_C) << "\n\n";
  o << "[diagnostics]\nwindow_centers = " << list(c.window_centers)
    << "\nwindow_half_width = " << num(c.window_half_width) << "\n\n";
  o << "[convergence]\nlevels = " << c.convergence_levels
    << "\nreference_factor = " << c.convergence_reference_factor << "\n\n";
  o << "[output]\ndir = " << quoted(c.output_dir.string()) << "\n";
  return o.str();
}

nlohmann::json to_json(const ScenarioConfig& c) {
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  j["mode"] = c.mode;
  j["grid"] = {{"n", c.n}, {"periods", c.periods}};
  j["physics"] = {{"alpha", c.alpha},
                  {"sign", c.sign == Sign::focusing ? "focusing" : "defocusing"},
                  {"eps", c.eps},
                  {"experimental", c.experimental}};
  j["time"] = {{"dt", c.dt}, {"T", c.T}};
  j["w0"] = {{"kind", c.w0.kind},   {"amplitude", c.w0.amplitude},
             {"mode", c.w0.mode},   {"width", c.w0.width},
             {"teeth_per_period", c.w0.teeth_per_period},
             {"modes", c.w0.modes}, {"re", c.w0.re},
             {"im", c.w0.im}};
  j["v0"] = {{"kind", c.v0.kind},         {"amplitude", c.v0.amplitude}, {"center", c.v0.center},
             {"width", c.v0.width},       {"velocity", c.v0.velocity},   {"first_slot", c.v0.first_slot},
             {"count", c.v0.count},       {"scale", c.v0.scale},         {"samples_file", c.v0.samples_file}};
  j["run"] = {{"seed", c.seed}, {"snapshot_every", c.snapshot_every}, {"safety_C", c.safety_C}};
  j["diagnostics"] = {{"window_centers", c.window_centers}, {"window_half_width", c.window_half_width}};
  j["convergence"] = {{"levels", c.convergence_levels},
                      {"reference_factor", c.convergence_reference_factor}};
  j["output"] = {{"dir", c.output_dir.string()}};
  return j;
}

Field build_w0(const ScenarioConfig& c) {
  const Grid torus = c.torus();
  if (c.w0.kind == "zero") return Field(torus);
  if (c.w0.kind == "plane_wave") {
    return sample([&](double x) { return c.w0.amplitude * std::polar(1.0, c.w0.mode * x); }, torus);
  }
  if (c.w0.kind == "tooth_train") {
    return make_tooth_train(ToothTrain{c.w0.amplitude, c.w0.width, c.w0.teeth_per_period}, torus);
  }
  return sample(
      [&](double x) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < c.w0.modes.size(); ++k) {
          acc += cplx{c.w0.re[k], c.w0.im[k]} * std::polar(1.0, c.w0.modes[k] * x);
        }
        return acc;
      },
      torus);
}

Field build_v0(const ScenarioConfig& c) {
  const Grid line = c.line();
  if (c.v0.kind == "zero" || c.mode == "torus") return Field(line);
  if (c.v0.kind == "gaussian") {
    return sample(
        [&](double x) {
          const double y = (x - c.v0.center) / c.v0.width;
          return c.v0.amplitude * std::exp(-0.5 * y * y) * std::polar(1.0, c.v0.velocity * x);
        },
        line);
  }
  if (c.v0.kind == "tooth_removal") {
    return make_tooth_removal(ToothTrain{c.w0.amplitude, c.w0.width, c.w0.teeth_per_period}, line,
                              c.v0.first_slot, c.v0.count, c.v0.scale);
  }
  std::ifstream in(c.v0.samples_file);
  if (!in) throw ConfigError("cannot open v0.samples_file " + c.v0.samples_file);
  std::vector<cplx> values;
  std::string line_text;
  std::getline(in, line_text);
  if (line_text.rfind("re,im", 0) != 0) throw ConfigError("samples file must start with the header re,im");
  while (std::getline(in, line_text)) {
    if (line_text.empty()) continue;
    const auto comma = line_text.find(',');
    if (comma == std::string::npos) throw ConfigError("malformed sample row: " + line_text);
    values.emplace_back(to_double("v0.samples_file", line_text.substr(0, comma)),
                        to_double("v0.samples_file", line_text.substr(comma + 1)));
  }
  if (values.size() != line.size()) {
    throw ConfigError("samples file has " + std::to_string(values.size()) + " rows, grid has " +
                      std::to_string(line.size()));
  }
  try {
    return Field(line, std::move(values));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid samples: ") + e.what());
  }
}

std::vector<Window> tracked_windows(const ScenarioConfig& c) {
  std::vector<Window> out;
  for (double x : c.window_centers) out.push_back(Window{x, c.window_half_width});
  return out;
}

}  // namespace hynls
