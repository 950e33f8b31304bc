#include "hynls/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "hynls/errors.hpp"
#include "hynls/hybrid_solver.hpp"
#include "hynls/norms.hpp"
#include "hynls/scenarios.hpp"
#include "hynls/torus_solver.hpp"

namespace hynls {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// All CSV numbers use %.17g so that reruns compare byte for byte.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : f_(std::fopen(path.c_str(), "w")) {
    if (!f_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) std::fprintf(f_, i ? ",%s" : "%s", header[i].c_str());
    std::fputc('\n', f_);
  }
  ~CsvWriter() {
    if (f_) std::fclose(f_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& cell(double x) {
    sep();
    std::fprintf(f_, "%.17g", x);
    return *this;
  }
  CsvWriter& cell(const std::string& s) {
    sep();
    std::fputs(s.c_str(), f_);
    return *this;
  }
  void end() {
    std::fputc('\n', f_);
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) std::fputc(',', f_);
    first_ = false;
  }
  std::FILE* f_;
  bool first_ = true;
};

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

RunManifest begin(const std::string& command, const ScenarioConfig& config) {
  RunManifest m;
  m.command = command;
  m.config = to_json(config);
  m.started_at = utc_now();
  fs::create_directories(config.output_dir);
  write_text(config.output_dir / "config.toml", to_toml(config));
  m.files["config"] = "config.toml";
  return m;
}

void write_snapshot_rows(CsvWriter& csv, double t, const std::string& part, const Field& f) {
  for (std::size_t j = 0; j < f.size(); ++j) {
    csv.cell(t).cell(part).cell(f.grid().x(j)).cell(f[j].real()).cell(f[j].imag()).end();
  }
}

void write_hybrid_outputs(const HybridTrajectory& traj, const fs::path& dir, RunManifest& m) {
  std::vector<std::string> header{"t", "mass_v", "mass_w", "energy_w", "sup_w", "exp_bound_margin"};
  for (std::size_t k = 0; k < traj.windows.size(); ++k) header.push_back("window_mass_" + std::to_string(k));
  const auto ratios = exp_bound_ratios(traj);
  {
    CsvWriter csv(dir / "diagnostics.csv", header);
    for (std::size_t n = 0; n < traj.diagnostics.size(); ++n) {
      const auto& d = traj.diagnostics[n];
      csv.cell(traj.times[n]).cell(d.mass_v).cell(d.mass_w).cell(d.energy_w).cell(d.sup_w).cell(1.0 - ratios[n]);
      for (double wm : d.window_masses) csv.cell(wm);
      csv.end();
    }
  }
  m.files["diagnostics"] = "diagnostics.csv";
  {
    CsvWriter csv(dir / "snapshots.csv", {"t", "part", "x", "re", "im"});
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      write_snapshot_rows(csv, traj.state_times[k], "w", traj.states[k].w);
      write_snapshot_rows(csv, traj.state_times[k], "v", traj.states[k].v);
    }
  }
  m.files["snapshots"] = "snapshots.csv";
}

// Runs body, mapping solver failures onto manifest status and exit code.
template <class F>
void guarded(RunManifest& m, F&& body) {
  try {
    body();
  } catch (const BlowUpError& e) {
    m.status = "blow_up";
    m.exit_code = 2;
    m.summary["blow_up"] = true;
    m.summary["blow_up_time"] = e.time();
    m.summary["mass_drift"] = encode_double(e.mass_drift());
    m.summary["message"] = e.what();
  } catch (const BoundaryContaminationError& e) {
    m.status = "boundary_contamination";
    m.exit_code = 1;
    m.summary["boundary_relative_mass"] = e.relative_mass();
    m.summary["message"] = e.what();
  } catch (const ResolutionError& e) {
    m.status = "config_error";
    m.exit_code = 3;
    m.summary["spectral_tail_ratio"] = e.tail_ratio();
    m.summary["message"] = e.what();
  } catch (const DivergenceError& e) {
    m.status = "check_failed";
    m.exit_code = 1;
    m.summary["message"] = e.what();
  }
  if (!m.summary.contains("blow_up")) m.summary["blow_up"] = false;
}

void finish(RunManifest& m, const fs::path& dir) {
  if (m.status.empty()) m.status = m.exit_code == 0 ? "ok" : "check_failed";
  m.finished_at = utc_now();
  write_manifest_atomic(m, dir);
}

TimeStepper stepper_of(const ScenarioConfig& c) { return TimeStepper{c.dt, c.params()}; }

double l2_distance(const Field& a, const Field& b) { return lp_norm(a - b, 2.0); }

// Every other sample of a field on the doubled grid; both grids share x_0.
Field every_other(const Field& fine, const Grid& coarse) {
  std::vector<cplx> v(coarse.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = fine[2 * j];
  return Field(coarse, std::move(v));
}

double floor_to_step(double T, double dt) { return std::floor(T / dt + 1e-9) * dt; }

}  // namespace

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["artifact"] = "hynls";
  j["artifact_version"] = kArtifactVersion;
  j["command"] = m.command;
  j["config"] = m.config;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["files"] = m.files;
  j["status"] = m.status;
  j["exit_code"] = m.exit_code;
  j["summary"] = m.summary;
  j["warnings"] = m.warnings;
  return j;
}

void write_manifest_atomic(const RunManifest& m, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path tmp = dir / "manifest.json.tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << to_json(m).dump(2) << "\n";
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, dir / "manifest.json");
}

RunManifest run_simulate(const ScenarioConfig& config) {
  config.validate();
  RunManifest m = begin("simulate", config);
  const fs::path& dir = config.output_dir;
  guarded(m, [&] {
    const TimeStepper st = stepper_of(config);
    const Field w0 = build_w0(config);
    if (config.mode == "torus") {
      const auto traj = solve_torus(w0, config.T, st, SolveOptions{1, true});
      {
        CsvWriter csv(dir / "diagnostics.csv", {"t", "mass_w", "energy_w", "sup_w", "h1_w"});
        for (std::size_t n = 0; n < traj.states.size(); ++n) {
          const auto& d = traj.diagnostics[n];
          csv.cell(traj.times[n]).cell(d.mass).cell(d.energy.total).cell(d.sup_norm).cell(d.h1_norm).end();
        }
      }
      m.files["diagnostics"] = "diagnostics.csv";
      {
        CsvWriter csv(dir / "snapshots.csv", {"t", "part", "x", "re", "im"});
        for (std::size_t n = 0; n < traj.states.size(); ++n) {
          if (n % static_cast<std::size_t>(config.snapshot_every) == 0 || n + 1 == traj.states.size()) {
            write_snapshot_rows(csv, traj.times[n], "w", traj.states[n]);
          }
        }
      }
      m.files["snapshots"] = "snapshots.csv";
      const auto cons = check_conservation(traj);
      const auto& last = traj.diagnostics.back();
      m.summary["final_time"] = traj.times.back();
      m.summary["final_mass_w"] = last.mass;
      m.summary["final_energy_w"] = last.energy.total;
      m.summary["final_h1_w"] = last.h1_norm;
      m.summary["mass_drift"] = cons.observed[0];
      m.summary["energy_drift"] = cons.observed[1];
      m.summary["conservation_passed"] = cons.passed;
      if (!cons.passed) m.exit_code = 1;
      return;
    }
    const Field v0 = build_v0(config);
    HybridOptions opt;
    opt.record_every = config.snapshot_every;
    opt.windows = tracked_windows(config);
    const auto traj = solve_hybrid(v0, w0, config.T, st, opt);
    write_hybrid_outputs(traj, dir, m);
    m.warnings = traj.warnings;
    const auto& last = traj.diagnostics.back();
    m.summary["final_time"] = traj.times.back();
    m.summary["final_mass_v"] = last.mass_v;
    m.summary["final_mass_w"] = last.mass_w;
    m.summary["final_energy_w"] = last.energy_w;
    m.summary["final_sup_w"] = last.sup_w;
    m.summary["final_boundary_mass_v"] = last.boundary_mass_v;
    // The bound is proven for alpha <= 2; beyond that it is recorded only.
    const bool proven = config.alpha <= 2.0;
    const auto rep = proven ? check_exp_bound(traj) : failure_global_diagnostic(traj);
    m.summary["exp_bound_margin"] = encode_double(rep.margin);
    m.summary["exp_bound_passed"] = rep.passed;
    m.summary["exp_bound_asserted"] = proven;
    if (!rep.passed) m.exit_code = 1;
  });
  finish(m, dir);
  return m;
}

GhostPulseResult ghost_pulse_curve(const ScenarioConfig& config) {
  config.validate();
  if (config.mode != "hybrid" || config.w0.kind != "tooth_train") {
    throw ConfigError("ghost-pulse needs mode = hybrid and w0.kind = tooth_train");
  }
  if (config.v0.kind != "tooth_removal" && config.v0.kind != "zero") {
    throw ConfigError("ghost-pulse needs v0.kind = tooth_removal or zero");
  }
  const ToothTrain train{config.w0.amplitude, config.w0.width, config.w0.teeth_per_period};
  const Window slot = slot_window(train, config.v0.first_slot);
  const TimeStepper st = stepper_of(config);
  const Field w0 = build_w0(config);
  const Field v0 = build_v0(config);
  HybridOptions opt;
  opt.record_every = config.snapshot_every;
  opt.windows = {slot};
  const auto traj = solve_hybrid(v0, w0, config.T, st, opt);
  // Intact train: the same window over w alone.
  TimeStepper st0 = st;
  st0.params.eps = 0.0;
  const auto base = solve_torus(w0, config.T, st0, SolveOptions{1, true});
  GhostPulseResult out;
  out.tooth_mass = train.tooth_mass();
  for (std::size_t n = 0; n < traj.diagnostics.size(); ++n) {
    out.curve.push_back(
        RegrowthPoint{traj.times[n], traj.diagnostics[n].window_masses[0], window_mass(base.states[n], slot)});
  }
  return out;
}

RunManifest run_ghost_pulse(const ScenarioConfig& config) {
  RunManifest m = begin("ghost-pulse", config);
  const fs::path& dir = config.output_dir;
  guarded(m, [&] {
    const auto res = ghost_pulse_curve(config);
    {
      CsvWriter csv(dir / "regrowth.csv", {"t", "window_mass", "baseline_mass", "fraction_of_tooth"});
      for (const auto& p : res.curve) {
        csv.cell(p.t).cell(p.window_mass).cell(p.baseline_mass).cell(p.window_mass / res.tooth_mass).end();
      }
    }
    m.files["regrowth"] = "regrowth.csv";
    double peak = 0.0;
    nlohmann::json first_1pct = nullptr;
    for (const auto& p : res.curve) {
      const double f = p.window_mass / res.tooth_mass;
      peak = std::max(peak, f);
      if (first_1pct.is_null() && f > 0.01) first_1pct = p.t;
    }
    m.summary["tooth_mass"] = res.tooth_mass;
    m.summary["initial_fraction"] = res.curve.front().window_mass / res.tooth_mass;
    m.summary["final_fraction"] = res.curve.back().window_mass / res.tooth_mass;
    m.summary["peak_fraction"] = peak;
    m.summary["first_time_above_1pct"] = first_1pct;
  });
  finish(m, dir);
  return m;
}

ConvergenceResult convergence_study(const ScenarioConfig& config) {
  config.validate();
  ConvergenceResult out;
  const Field w0 = build_w0(config);
  const bool hybrid = config.mode == "hybrid";
  const Field v0 = build_v0(config);
  const double T = config.T;
  auto torus_final = [&](const Field& w, double dt) {
    const auto traj = solve_torus(w, T, TimeStepper{dt, config.params()}, SolveOptions{1 << 30, true});
    return traj.states.back();
  };
  auto hybrid_final = [&](const Field& v, const Field& w, double dt) {
    HybridOptions opt;
    opt.record_every = 1 << 30;
    const auto traj = solve_hybrid(v, w, T, TimeStepper{dt, config.params()}, opt);
    return traj.states.back().v;
  };
  const double dt_ref = config.dt / config.convergence_reference_factor;
  const Field w_ref = torus_final(w0, dt_ref);
  std::optional<Field> v_ref;
  if (hybrid) v_ref = hybrid_final(v0, w0, dt_ref);
  // Errors below this are roundoff, where an order means nothing.
  const double floor_abs = 1e-11;
  bool all_tiny = true;
  auto push = [&](const std::string& solver, double dt, double err) {
    ConvergenceRow row{solver, dt, err, std::nullopt};
    if (!out.rows.empty() && out.rows.back().solver == solver) {
      const double prev = out.rows.back().error;
      if (prev > floor_abs && err > floor_abs) row.order = std::log2(prev / err);
    }
    all_tiny = all_tiny && err <= floor_abs;
    out.rows.push_back(row);
  };
  for (int k = 0; k < config.convergence_levels; ++k) {
    const double dt = config.dt / (1 << k);
    push("torus", dt, l2_distance(torus_final(w0, dt), w_ref));
  }
  if (hybrid) {
    for (int k = 0; k < config.convergence_levels; ++k) {
      const double dt = config.dt / (1 << k);
      push("hybrid", dt, l2_distance(hybrid_final(v0, w0, dt), *v_ref));
    }
  }
  out.exact = all_tiny;
  // Grid doubling at the finest level; sampled v0 cannot be resampled.
  if (config.v0.kind != "samples") {
    ScenarioConfig fine = config;
    fine.n = 2 * config.n;
    const double dt = config.dt / (1 << (config.convergence_levels - 1));
    const Field wf = torus_final(build_w0(fine), dt);
    out.grid_errors.push_back(l2_distance(torus_final(w0, dt), every_other(wf, config.torus())));
    if (hybrid) {
      const Field vf = hybrid_final(build_v0(fine), build_w0(fine), dt);
      out.grid_errors.push_back(l2_distance(hybrid_final(v0, w0, dt), every_other(vf, config.line())));
    }
  }
  return out;
}

RunManifest run_convergence(const ScenarioConfig& config) {
  RunManifest m = begin("convergence", config);
  const fs::path& dir = config.output_dir;
  guarded(m, [&] {
    const auto res = convergence_study(config);
    {
      CsvWriter csv(dir / "convergence.csv", {"solver", "dt", "error", "order"});
      for (const auto& r : res.rows) {
        csv.cell(r.solver).cell(r.dt).cell(r.error);
        if (r.order) {
          csv.cell(*r.order);
        } else {
          csv.cell(std::string{});
        }
        csv.end();
      }
    }
    m.files["convergence"] = "convergence.csv";
    nlohmann::json orders = nlohmann::json::array();
    bool within = true;
    for (const auto& r : res.rows) {
      if (!r.order) continue;
      orders.push_back({{"solver", r.solver}, {"dt", r.dt}, {"order", *r.order}});
      within = within && std::abs(*r.order - 2.0) <= 0.2;
    }
    m.summary["orders"] = orders;
    m.summary["grid_doubling_errors"] = res.grid_errors;
    m.summary["exact"] = res.exact;
    m.summary["orders_within_2_pm_0.2"] = within;
    if (res.exact) m.summary["note"] = "errors at roundoff level; the split operators commute";
    if (!res.exact && !within) m.exit_code = 1;
  });
  finish(m, dir);
  return m;
}

PicardStudy picard_study(const ScenarioConfig& config) {
  config.validate();
  PicardStudy out;
  const Field w0 = build_w0(config);
  const TimeStepper st = stepper_of(config);
  out.torus_T = floor_to_step(std::min(config.T, torus_local_time(w0, config.alpha, config.safety_C)), config.dt);
  if (out.torus_T <= 0.0) throw ConfigError("torus local time is shorter than one step");
  out.torus = picard_iterate_torus(w0, out.torus_T, st);
  const auto strang = solve_torus(w0, out.torus_T, st, SolveOptions{1, true});
  for (std::size_t n = 0; n < strang.states.size(); ++n) {
    out.torus_vs_strang = std::max(out.torus_vs_strang, l2_distance(strang.states[n], out.torus.final_iterate[n]));
  }
  if (config.mode == "hybrid") {
    const Field v0 = build_v0(config);
    TimeStepper st0 = st;
    st0.params.eps = 0.0;
    const auto w_traj = solve_torus(w0, config.T, st0, SolveOptions{1, true});
    out.line_T = floor_to_step(std::min(config.T, local_time(v0, w_traj, config.safety_C)), config.dt);
    if (out.line_T <= 0.0) throw ConfigError("line local time is shorter than one step");
    out.line = picard_iterate_v(v0, w_traj, out.line_T, config.params());
    const auto hyb = solve_hybrid(v0, w0, out.line_T, st, HybridOptions{});
    for (std::size_t n = 0; n < hyb.states.size(); ++n) {
      out.line_vs_strang = std::max(out.line_vs_strang, l2_distance(hyb.states[n].v, out.line.final_iterate[n]));
    }
  }
  return out;
}

namespace {

bool strictly_decreasing(const std::vector<double>& d) {
  for (std::size_t k = 1; k < d.size(); ++k) {
    if (!(d[k] < d[k - 1])) return false;
  }
  return true;
}

nlohmann::json picard_summary(const PicardResult& r, double T, double vs_strang) {
  nlohmann::json j;
  j["T"] = T;
  j["iterations"] = r.differences.size();
  j["converged"] = r.converged;
  j["monotone"] = strictly_decreasing(r.differences);
  j["final_ratio"] = r.ratios.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.ratios.back());
  j["max_ratio"] = r.ratios.empty() ? nlohmann::json(nullptr)
                                    : nlohmann::json(*std::max_element(r.ratios.begin(), r.ratios.end()));
  j["distance_to_strang"] = vs_strang;
  return j;
}

bool picard_ok(const PicardResult& r, double vs_strang) {
  return strictly_decreasing(r.differences) && !r.ratios.empty() && r.ratios.back() < 0.5 && vs_strang < 1e-4;
}

}  // namespace

RunManifest run_picard(const ScenarioConfig& config) {
  RunManifest m = begin("picard", config);
  const fs::path& dir = config.output_dir;
  guarded(m, [&] {
    const auto s = picard_study(config);
    {
      CsvWriter csv(dir / "picard.csv", {"iterator", "k", "difference", "ratio"});
      auto rows = [&](const std::string& name, const PicardResult& r) {
        for (std::size_t k = 0; k < r.differences.size(); ++k) {
          csv.cell(name).cell(static_cast<double>(k)).cell(r.differences[k]);
          if (k >= 1) {
            csv.cell(r.ratios[k - 1]);
          } else {
            csv.cell(std::string{});
          }
          csv.end();
        }
      };
      rows("torus", s.torus);
      if (config.mode == "hybrid") rows("line", s.line);
    }
    m.files["picard"] = "picard.csv";
    m.summary["torus"] = picard_summary(s.torus, s.torus_T, s.torus_vs_strang);
    bool ok = picard_ok(s.torus, s.torus_vs_strang);
    if (config.mode == "hybrid") {
      m.summary["line"] = picard_summary(s.line, s.line_T, s.line_vs_strang);
      ok = ok && picard_ok(s.line, s.line_vs_strang);
    }
    m.summary["contraction_passed"] = ok;
    if (!ok) m.exit_code = 1;
  });
  finish(m, dir);
  return m;
}

RunManifest run_verify(const SuiteConfig& suite, const fs::path& output_dir) {
  RunManifest m;
  m.command = "verify";
  m.config = {{"seed", suite.seed},
              {"corpus_size", suite.corpus_size},
              {"exp_bound_cases", suite.exp_bound_cases},
              {"horizon", suite.horizon},
              {"tolerance_scale", suite.tolerance_scale},
              {"only", suite.only}};
  m.started_at = utc_now();
  fs::create_directories(output_dir / "reports");
  const auto reports = run_suite(suite);
  {
    CsvWriter csv(output_dir / "summary.csv", {"name", "passed", "margin", "seed", "report", "notes"});
    for (const auto& r : reports) {
      const std::string file = "reports/" + r.name + ".json";
      write_text(output_dir / file, to_json(r).dump(2) + "\n");
      m.files["report:" + r.name] = file;
      csv.cell(r.name).cell(std::string(r.passed ? "true" : "false")).cell(r.margin);
      csv.cell(r.seed ? std::to_string(*r.seed) : std::string{}).cell(file).cell(csv_quote(r.notes)).end();
      m.summary["checks"][r.name] = r.passed;
      if (!r.passed) m.exit_code = 1;
    }
  }
  m.files["summary"] = "summary.csv";
  m.summary["failed"] = 0;
  for (const auto& r : reports) {
    if (!r.passed) m.summary["failed"] = m.summary["failed"].get<int>() + 1;
  }
  m.summary["blow_up"] = false;
  finish(m, output_dir);
  return m;
}

}  // namespace hynls
