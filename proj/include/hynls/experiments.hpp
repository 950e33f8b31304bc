#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hynls/field.hpp"
#include "hynls/nonlinearity.hpp"
#include "hynls/verification.hpp"

namespace hynls {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

struct W0Spec {
  std::string kind;  // zero | plane_wave | tooth_train | fourier
  double amplitude = 0.0;
  int mode = 0;
  double width = 0.0;
  int teeth_per_period = 1;
  std::vector<int> modes;
  std::vector<double> re;
  std::vector<double> im;
};

struct V0Spec {
  std::string kind;  // zero | gaussian | tooth_removal | samples
  double amplitude = 0.0;
  double center = 0.0;
  double width = 0.0;
  double velocity = 0.0;
  int first_slot = 0;
  int count = 0;
  double scale = 0.0;
  std::string samples_file;  // CSV with columns re,im; one row per line grid point
};

// Parsed scenario file. Every key is required; a file may start from another
// one with `extends = "path"` and override keys.
struct ScenarioConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name;
  std::string mode;  // hybrid | torus
  int n = 0;
  int periods = 0;
  double alpha = 0.0;
  Sign sign = Sign::defocusing;
  double eps = 0.0;
  bool experimental = false;
  double dt = 0.0;
  double T = 0.0;
  W0Spec w0;
  V0Spec v0;
  std::uint64_t seed = 0;
  int snapshot_every = 0;
  double safety_C = 0.0;
  std::vector<double> window_centers;
  double window_half_width = 0.0;
  int convergence_levels = 0;
  int convergence_reference_factor = 0;
  std::filesystem::path output_dir;

  // Throws ConfigError on inconsistent values.
  void validate() const;
  NonlinearityParams params() const { return {alpha, sign, eps, experimental}; }
  Grid torus() const { return make_torus_grid(n); }
  Grid line() const { return make_line_grid(periods, n); }
};

// Throws ConfigError on missing, unknown or malformed keys.
ScenarioConfig load_scenario(const std::filesystem::path& path);
// Flat key -> value map, as read (after `extends` resolution).
std::map<std::string, std::vector<std::string>> read_config_items(const std::filesystem::path& path);

// Self-contained TOML text of the config; loading it gives back the same config.
std::string to_toml(const ScenarioConfig& config);
nlohmann::json to_json(const ScenarioConfig& config);

Field build_w0(const ScenarioConfig& config);
Field build_v0(const ScenarioConfig& config);
std::vector<Window> tracked_windows(const ScenarioConfig& config);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string started_at;
  std::string finished_at;
  std::map<std::string, std::string> files;  // role -> file name inside the run directory
  nlohmann::json summary;
  std::vector<std::string> warnings;
  std::string status;  // ok | check_failed | blow_up | boundary_contamination | config_error
  int exit_code = 0;
};

nlohmann::json to_json(const RunManifest& m);
// Writes manifest.json into dir via a temporary file and rename.
void write_manifest_atomic(const RunManifest& m, const std::filesystem::path& dir);

// Each run writes into config.output_dir (created if needed).
RunManifest run_simulate(const ScenarioConfig& config);
RunManifest run_ghost_pulse(const ScenarioConfig& config);
RunManifest run_convergence(const ScenarioConfig& config);
RunManifest run_picard(const ScenarioConfig& config);
RunManifest run_verify(const SuiteConfig& suite, const std::filesystem::path& output_dir);

struct RegrowthPoint {
  double t;
  double window_mass;    // mass of u over the emptied slot
  double baseline_mass;  // same window for the intact train
};

struct GhostPulseResult {
  double tooth_mass = 0.0;
  std::vector<RegrowthPoint> curve;
};

// Evolves the tooth-removal problem and samples the regrowth curve at every step.
GhostPulseResult ghost_pulse_curve(const ScenarioConfig& config);

struct ConvergenceRow {
  std::string solver;  // torus | hybrid
  double dt;
  double error;
  std::optional<double> order;  // against the previous row; empty at roundoff level
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<double> grid_errors;  // n vs 2n at the finest dt, torus then hybrid
  bool exact = false;  // every error at roundoff level (operators commute)
};

ConvergenceResult convergence_study(const ScenarioConfig& config);

struct PicardStudy {
  double torus_T = 0.0;
  PicardResult torus;
  double torus_vs_strang = 0.0;
  double line_T = 0.0;
  PicardResult line;
  double line_vs_strang = 0.0;
};

// Both iterators on their local horizons (rounded down to a multiple of dt),
// compared against the Strang solution at the horizon.
PicardStudy picard_study(const ScenarioConfig& config);

}  // namespace hynls
