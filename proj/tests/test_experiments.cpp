#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hynls/errors.hpp"
#include "hynls/experiments.hpp"

using namespace hynls;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = HYNLS_CONFIG_DIR;

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("hynls_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Config file extending the defaults with a small grid and short horizon.
fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "scenario.toml";
  std::ofstream out(p);
  out << "extends = \"" << (kConfigs / "defaults.toml").string() << "\"\n" << body;
  return p;
}

const char* kSmall =
    "[grid]\nn = 64\nperiods = 4\n[time]\ndt = 0.001\nT = 0.05\n";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("defaults parse") {
  const auto c = load_scenario(kConfigs / "defaults.toml");
  CHECK(c.mode == "hybrid");
  CHECK(c.n == 256);
  CHECK(c.periods == 16);
  CHECK(c.alpha == 2.0);
  CHECK(c.sign == Sign::focusing);
  CHECK(c.w0.kind == "tooth_train");
  CHECK(c.w0.modes.empty());
  CHECK(c.window_centers == std::vector<double>{0.0});
  CHECK(c.convergence_reference_factor == 16);
}

TEST_CASE("every shipped config loads") {
  for (const auto& e : fs::directory_iterator(kConfigs)) {
    if (e.path().extension() != ".toml") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_scenario(e.path()));
  }
}

TEST_CASE("config errors") {
  const auto d = scratch_dir("cfg_errors");
  {
    std::ofstream out(d / "missing.toml");
    out << "schema_version = 1\nname = \"x\"\n";
  }
  CHECK_THROWS_AS((void)(load_scenario(d / "missing.toml")), ConfigError);
  CHECK_THROWS_AS((void)(load_scenario(write_config(d, "[grid]\nbogus = 1\n"))), ConfigError);
  CHECK_THROWS_AS((void)(load_scenario(write_config(d, "[grid]\nn = \"abc\"\n"))), ConfigError);
  CHECK_THROWS_AS((void)(load_scenario(write_config(d, "[grid]\nn = 100\n"))), ConfigError);
  CHECK_THROWS_AS((void)(load_scenario(write_config(d, "[time]\nT = 0.0105\n"))), ConfigError);
  CHECK_THROWS_AS((void)(load_scenario(write_config(d, "[physics]\nsign = \"sideways\"\n"))), ConfigError);
  CHECK_THROWS_AS((void)(load_scenario(write_config(d, "schema_version = 2\n"))), ConfigError);
  CHECK_THROWS_AS((void)(load_scenario(d / "nonexistent.toml")), ConfigError);
  {
    std::ofstream a(d / "a.toml");
    a << "extends = \"b.toml\"\n";
    std::ofstream b(d / "b.toml");
    b << "extends = \"a.toml\"\n";
  }
  CHECK_THROWS_AS((void)(load_scenario(d / "a.toml")), ConfigError);
}

TEST_CASE("TOML snapshot round trip") {
  const auto d = scratch_dir("roundtrip");
  const auto c = load_scenario(write_config(
      d, "[w0]\nkind = \"fourier\"\nmodes = [0, 3, -2]\nre = [1.0, 0.1, 0.0]\nim = [0.0, 0.0, 0.3333333333333333]\n"
         "[v0]\nkind = \"gaussian\"\nvelocity = 0.7\n[diagnostics]\nwindow_centers = [0.0, 6.283185307179586]\n"));
  {
    std::ofstream out(d / "snapshot.toml");
    out << to_toml(c);
  }
  const auto back = load_scenario(d / "snapshot.toml");
  CHECK(to_json(back) == to_json(c));
}

TEST_CASE("samples file matches the analytic profile") {
  const auto d = scratch_dir("samples");
  const auto g = load_scenario(write_config(d, std::string(kSmall) + "[v0]\nkind = \"gaussian\"\nvelocity = 1.5\n"));
  const Field ref = build_v0(g);
  {
    std::ofstream csv(d / "v0.csv");
    csv << "re,im\n";
    char buf[128];
    for (std::size_t i = 0; i < ref.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", ref[i].real(), ref[i].imag());
      csv << buf;
    }
  }
  const auto s = load_scenario(write_config(d, std::string(kSmall) + "[v0]\nkind = \"samples\"\nsamples_file = \"v0.csv\"\n"));
  CHECK(lp_norm(build_v0(s) - ref, kInf) == 0.0);
}

TEST_CASE("zero scenario writes zeros") {
  const auto d = scratch_dir("zero");
  auto c = load_scenario(write_config(d, std::string(kSmall) + "[w0]\nkind = \"zero\"\n[v0]\nkind = \"zero\"\n"));
  c.output_dir = d / "run";
  const auto m = run_simulate(c);
  CHECK(m.exit_code == 0);
  CHECK(m.status == "ok");
  std::ifstream in(d / "run" / "diagnostics.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,mass_v,mass_w,energy_w,sup_w,exp_bound_margin,window_mass_0");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // t
    for (int col = 1; std::getline(ss, cell, ','); ++col) {
      // exp_bound_margin = 1 - ||v(t)|| / bound, which is 1 for v = 0
      CHECK(std::stod(cell) == (col == 5 ? 1.0 : 0.0));
    }
    ++rows;
  }
  CHECK(rows == 51);
}

TEST_CASE("reruns are bit identical and the manifest lists real files") {
  const auto d = scratch_dir("rerun");
  auto c = load_scenario(write_config(d, kSmall));
  c.output_dir = d / "a";
  const auto ma = run_simulate(c);
  c.output_dir = d / "b";
  run_simulate(c);
  REQUIRE(ma.exit_code == 0);
  for (const char* f : {"diagnostics.csv", "snapshots.csv"})
    CHECK(slurp(d / "a" / f) == slurp(d / "b" / f));
  const auto j = nlohmann::json::parse(slurp(d / "a" / "manifest.json"));
  CHECK(j.at("status") == "ok");
  CHECK(j.at("artifact_version") == kArtifactVersion);
  for (const auto& [role, file] : j.at("files").items()) {
    CAPTURE(role);
    CHECK(fs::exists(d / "a" / file.get<std::string>()));
  }
  CHECK(!fs::exists(d / "a" / "manifest.json.tmp"));
  // The snapshot reproduces the run.
  auto snap = load_scenario(d / "a" / "config.toml");
  snap.output_dir = d / "c";
  run_simulate(snap);
  CHECK(slurp(d / "a" / "diagnostics.csv") == slurp(d / "c" / "diagnostics.csv"));
}

TEST_CASE("ghost pulse curve") {
  const auto d = scratch_dir("ghost");
  const auto c = load_scenario(write_config(d, "[grid]\nn = 128\nperiods = 8\n[time]\nT = 0.1\n"));
  const auto res = ghost_pulse_curve(c);
  REQUIRE(!res.curve.empty());
  CHECK(res.curve.front().window_mass < 1e-6 * res.tooth_mass);
  CHECK(res.curve.front().baseline_mass == doctest::Approx(res.tooth_mass).epsilon(1e-6));
  auto intact = c;
  intact.v0.kind = "zero";
  const auto ri = ghost_pulse_curve(intact);
  for (const auto& p : ri.curve) CHECK(std::abs(p.window_mass - p.baseline_mass) <= 1e-12 * p.baseline_mass);
}

TEST_CASE("failures map to exit codes") {
  const auto d = scratch_dir("exit_codes");
  auto c = load_scenario(write_config(d, "mode = \"torus\"\n" + std::string(kSmall) +
                                             "[w0]\nkind = \"plane_wave\"\nmode = 30\n[v0]\nkind = \"zero\"\n"));
  c.output_dir = d / "unresolved";
  const auto m = run_simulate(c);
  CHECK(m.exit_code == 3);
  CHECK(m.status == "config_error");
  CHECK(fs::exists(d / "unresolved" / "manifest.json"));

  auto b = load_scenario(kConfigs / "blowup_quintic.toml");
  b.output_dir = d / "blowup";
  const auto mb = run_simulate(b);
  CHECK(mb.exit_code == 2);
  CHECK(mb.status == "blow_up");
}

TEST_CASE("convergence study on the linear equation is exact") {
  const auto d = scratch_dir("conv_linear");
  const auto c = load_scenario(write_config(d, "[grid]\nn = 64\nperiods = 4\n[physics]\nalpha = 1.0\n[time]\nT = 0.05\n"));
  const auto r = convergence_study(c);
  CHECK(r.exact);
  for (const auto& row : r.rows) CHECK(!row.order.has_value());
}
