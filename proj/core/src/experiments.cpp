#include "invasion/experiments.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "invasion/bridge_lab.hpp"
#include "invasion/csv.hpp"
#include "invasion/parallel.hpp"

#ifndef INVASION_VERSION
#define INVASION_VERSION "0.0.0"
#endif

namespace invasion {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n') ? ' ' : c;
  }
  return out + '"';
}

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::string path(const std::string& name) {
    files_.push_back(name);
    return (fs::path(dir_) / name).string();
  }

  const std::string& dir() const { return dir_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

WaveProfile wave_for(const ExperimentConfig& cfg) {
  WaveOptions wo;
  wo.tol = cfg.wave_tol;
  wo.half_width = cfg.wave_half_width;
  wo.dx = cfg.wave_dx;
  return compute_profile(wo);
}

void write_fronts(Outputs& out, const FrontTrack& tr) {
  CsvWriter csv(out.path("fronts.csv"), {"t", "x_front_v", "x_front_w", "clamp_events"});
  for (std::size_t i = 0; i < tr.size(); ++i) {
    csv.row({csv_number(tr.times[i]), csv_number(tr.x_front_v[i]), csv_number(tr.x_front_w[i]),
             csv_number(tr.clamp_events[i])});
  }
}

void write_fits(Outputs& out, const FrontTrack& tr, double window_fraction, bool with_v) {
  CsvWriter csv(out.path("speed_fit.csv"),
                {"field", "u_hat", "c_log", "intercept", "rms_residual", "t_lo", "t_hi", "n_samples"});
  auto one = [&](const char* name, FrontField f) {
    SpeedFit fit;
    try {
      fit = fit_speed(tr, f, window_fraction);
    } catch (const FitError&) {
      fit.u_hat = fit.c_log = fit.intercept = fit.rms_residual = kNaN;
    }
    csv.row({name, csv_number(fit.u_hat), csv_number(fit.c_log), csv_number(fit.intercept),
             csv_number(fit.rms_residual), csv_number(fit.t_lo), csv_number(fit.t_hi),
             csv_number(static_cast<std::uint64_t>(fit.n_samples))});
  };
  if (with_v) one("v", FrontField::kV);
  one("w", FrontField::kW);
}

RunOptions run_options(const ExperimentConfig& cfg) {
  RunOptions o;
  o.t_end = cfg.t_end;
  o.sample_dt = cfg.sample_dt;
  o.a = cfg.a_offset;
  o.margin = cfg.margin;
  o.shift_cells = cfg.shift_cells;
  o.v_init = cfg.v_init;
  o.snapshot_times = cfg.snapshot_times;
  return o;
}

void do_simulate(const ExperimentConfig& cfg, Outputs& out, bool flat) {
  const ScaledParams s = cfg.resolved_scaled();
  const Grid grid = cfg.grid();
  RunOptions o = run_options(cfg);
  WaveProfile wave;
  if (flat) {
    o.v_mode = VMode::kFrozen;
  } else {
    wave = wave_for(cfg);
  }
  const RunResult r = simulate(s, grid, wave, o);
  write_fronts(out, r.track);
  write_fits(out, r.track, cfg.window_fraction, !flat);
  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    const Snapshot& sn = r.snapshots[k];
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%zu.csv", k);
    CsvWriter csv(out.path(name), {"x", "v", "w"});
    for (std::size_t i = 0; i < sn.x.size(); ++i) csv.row({sn.x[i], sn.v[i], sn.w[i]});
  }
}

void do_speed_scan(const ExperimentConfig& cfg, Outputs& out) {
  const ScaledParams base = cfg.resolved_scaled();
  ScanOptions so;
  so.t_end = cfg.t_end;
  so.sample_dt = cfg.sample_dt;
  so.window_fraction = cfg.window_fraction;
  so.a = cfg.a_offset;
  so.workers = cfg.workers;
  const auto rows = speed_scan(base.gamma_t, cfg.beta_list, cfg.grid(), wave_for(cfg), so);
  CsvWriter csv(out.path("speed_scan.csv"),
                {"beta_t", "u_meas_coupled", "u_meas_flat", "branch1", "branch2", "u_c_regime"});
  std::vector<std::string> errors;
  for (const auto& r : rows) {
    csv.row({r.beta_t, r.u_meas_coupled, r.u_meas_flat, r.prediction.branch1, r.prediction.branch2,
             r.prediction.u_c_regime});
    if (!r.error.empty()) errors.push_back(csv_number(r.beta_t) + "," + quote(r.error));
  }
  if (!errors.empty()) {
    CsvWriter err(out.path("speed_scan_errors.csv"), {"beta_t", "error"});
    for (const auto& e : errors) {
      const auto comma = e.find(',');
      err.row({e.substr(0, comma), e.substr(comma + 1)});
    }
  }
}

void do_wave_profile(const ExperimentConfig& cfg, Outputs& out) {
  const WaveProfile w = wave_for(cfg);
  {
    CsvWriter csv(out.path("wave.csv"), {"x", "omega"});
    for (std::size_t i = 0; i < w.xs.size(); ++i) csv.row({w.xs[i], w.omega[i]});
  }
  const TailFit tf = check_tails(w);
  CsvWriter csv(out.path("wave_tails.csv"), {"tail_C", "tail_c", "right_slope", "left_slope",
                                             "right_residual", "left_residual", "centring_error"});
  csv.row({tf.tail_C, tf.tail_c, tf.right_slope, tf.left_slope, tf.right_residual, tf.left_residual,
           w.centring_error});
}

void do_bridge_check(const ExperimentConfig& cfg, Outputs& out) {
  McParams p;
  p.t = cfg.bridge_t;
  p.alpha = cfg.bridge_alpha;
  p.K = cfg.bridge_K;
  p.n_paths = cfg.n_paths;
  p.n_steps = cfg.n_steps;
  p.seed = cfg.seed;
  p.workers = cfg.workers;
  if (cfg.bridge_study != "laplace") {
    CsvWriter csv(out.path("bridge_tail.csv"), {"s", "p_exact", "p_asym", "p_mc", "mc_stderr"});
    for (double s : cfg.bridge_s) {
      p.s = s;
      const McEstimate mc = mc_functional(Functional::kTailProbability, p);
      csv.row({s, occupation_tail_exact(p.t, s, p.alpha, p.K),
               occupation_tail_asymptotic(p.t, s, p.alpha, p.K), mc.mean, mc.std_error});
    }
  }
  if (cfg.bridge_study != "tail") {
    CsvWriter csv(out.path("bridge_laplace.csv"), {"lambda", "log_laplace_mc", "rate_theory"});
    for (double lambda : cfg.bridge_lambda) {
      p.lambda = lambda;
      const McEstimate mc = mc_functional(Functional::kLaplace, p);
      double rate = kNaN;
      if (2.0 * lambda > p.alpha * p.alpha) rate = laplace_rate(lambda, p.alpha);
      csv.row({lambda, std::log(mc.mean) / p.t, rate});
    }
  }
}

void do_fk_check(const ExperimentConfig& cfg, Outputs& out) {
  const ScaledParams s = cfg.resolved_scaled();
  FkCheckOptions o;
  o.t = cfg.fk_t;
  o.xs = cfg.fk_x;
  o.panel = cfg.fk_panel;
  o.span = cfg.fk_span;
  o.frame_dt = cfg.fk_frame_dt;
  o.fk.a = cfg.a_offset;
  o.fk.n_paths = cfg.fk_n_paths;
  o.fk.n_steps = cfg.fk_n_steps;
  o.fk.seed = cfg.seed;
  o.fk.workers = cfg.workers;
  const auto rows = fk_check(s, cfg.grid(), wave_for(cfg), o);
  CsvWriter csv(out.path("fk_check.csv"), {"t", "x", "pde_w", "fk_mean", "fk_stderr", "fk_lower",
                                           "fk_upper", "crude_lower", "crude_upper"});
  for (const auto& r : rows) {
    csv.row({r.fk.t, r.fk.x, r.pde_w, r.fk.full.mean, r.fk.full.std_error, r.fk.lower.mean,
             r.fk.upper.mean, r.crude.lower, r.crude.upper});
  }
}

void do_theory(const ExperimentConfig& cfg, Outputs& out, std::ostream* table_out) {
  if (cfg.steps < 1) throw ConfigError("theory: steps must be >= 1");
  if (cfg.theory_gamma.empty()) throw ConfigError("theory: empty gamma list");
  std::ostringstream text;
  const std::vector<std::string> header{"gamma_t", "beta_t",    "beta_star",     "branch1",
                                        "branch2", "u_c_regime", "u_c_as_stated"};
  CsvWriter csv(out.path("theory.csv"), header);
  for (std::size_t i = 0; i < header.size(); ++i) text << (i ? "," : "") << header[i];
  text << '\n';
  for (double g : cfg.theory_gamma) {
    for (std::size_t k = 0; k < cfg.steps; ++k) {
      const double b = cfg.steps == 1 ? cfg.beta_min
                                      : cfg.beta_min + (cfg.beta_max - cfg.beta_min) *
                                                           static_cast<double>(k) /
                                                           static_cast<double>(cfg.steps - 1);
      const SpeedPrediction p = predict(make_scaled(g, b));
      const std::vector<std::string> cells{csv_number(g),         csv_number(b),
                                           csv_number(p.beta_star), csv_number(p.branch1),
                                           csv_number(p.branch2), csv_number(p.u_c_regime),
                                           csv_number(p.u_c_as_stated)};
      csv.row(cells);
      for (std::size_t i = 0; i < cells.size(); ++i) text << (i ? "," : "") << cells[i];
      text << '\n';
    }
  }
  if (table_out) *table_out << text.str();
}

void write_manifest(const ExperimentConfig& cfg, Outputs& out, const std::string& config_text) {
  std::ofstream m(out.path("manifest"), std::ios::binary);
  m << "experiment = " << cfg.experiment << '\n'
    << "config_hash = fnv1a64:" << hex64(fnv1a64(config_text)) << '\n'
    << "seed = " << cfg.seed << '\n'
    << "version = " << version_string() << '\n'
    << "files = ";
  const auto& files = out.files();
  bool first = true;
  for (const auto& f : files) {
    if (f == "manifest") continue;
    m << (first ? "" : ",") << f;
    first = false;
  }
  m << '\n';
}

}  // namespace

std::vector<ScanRow> speed_scan(double gamma_t, const std::vector<double>& betas, const Grid& grid,
                                const WaveProfile& wave, const ScanOptions& opt) {
  return parallel_map<ScanRow>(betas.size(), opt.workers, [&](std::size_t i) {
    ScanRow row;
    row.beta_t = betas[i];
    row.u_meas_coupled = row.u_meas_flat = kNaN;
    try {
      const ScaledParams s = make_scaled(gamma_t, betas[i]);
      row.prediction = predict(s);
      const FrontTrack coupled = run(s, grid, opt.t_end, opt.sample_dt, opt.a, wave);
      row.u_meas_coupled = fit_speed(coupled, FrontField::kW, opt.window_fraction).u_hat;
      const FrontTrack flat = run_flat_background(s, grid, opt.t_end, opt.sample_dt);
      row.u_meas_flat = fit_speed(flat, FrontField::kW, opt.window_fraction).u_hat;
    } catch (const Error& e) {
      row.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    return row;
  });
}

std::vector<FkCheckRow> fk_check(const ScaledParams& s, const Grid& grid, const WaveProfile& wave,
                                 const FkCheckOptions& opt) {
  RunOptions ro;
  ro.t_end = opt.t;
  ro.sample_dt = std::min(0.5, opt.t);
  ro.a = opt.fk.a;
  ro.trajectory_dt = opt.frame_dt;
  RunResult r = simulate(s, grid, wave, ro);
  WTrajectory traj = std::move(r.trajectory);
  if (traj.times.empty() || traj.times.back() < r.final_state.time) {
    traj.times.push_back(r.final_state.time);
    traj.x_left.push_back(r.final_state.window_offset);
    traj.w.push_back(r.final_state.w);
  }
  const WLookup wl(std::move(traj), s);

  std::vector<double> xs = opt.xs;
  if (xs.empty()) {
    if (opt.panel < 2) throw ConfigError("fk_check: panel needs at least 2 points");
    const double xf = r.track.x_front_w.back();
    for (std::size_t k = 0; k < opt.panel; ++k) {
      xs.push_back(xf - opt.span + 2.0 * opt.span * static_cast<double>(k) /
                                       static_cast<double>(opt.panel - 1));
    }
  }
  std::vector<FkCheckRow> rows;
  for (double x : xs) {
    FkCheckRow row;
    row.pde_w = wl(opt.t, x);
    row.fk = fk_all(opt.t, x, s, wave, wl, opt.fk);
    row.crude = crude_bounds(opt.t, x, s);
    rows.push_back(row);
  }
  return rows;
}

std::string resolve_output_dir(const ExperimentConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv("INVASION_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kConstraint:
    case ErrorKind::kDomain:
    case ErrorKind::kPrecondition:
      return 2;
    case ErrorKind::kConvergence:
    case ErrorKind::kNumericalBlowup:
    case ErrorKind::kFrontLost:
    case ErrorKind::kFit:
      return 3;
  }
  return 1;
}

std::string error_line(std::string_view experiment, const Error& e) {
  std::ostringstream os;
  os << "error: kind=" << to_string(e.kind()) << " experiment=" << experiment;
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e); ce != nullptr && ce->line() > 0) {
    os << " line=" << ce->line();
  }
  os << " message=" << quote(e.what());
  return os.str();
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string version_string() {
  std::ostringstream os;
  os << "invasion " << INVASION_VERSION << "; boost " << BOOST_VERSION / 100000 << '.'
     << BOOST_VERSION / 100 % 1000 << '.' << BOOST_VERSION % 100 << "; eigen " << EIGEN_WORLD_VERSION
     << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << "; compiler " << __VERSION__;
  return os.str();
}

RunReport run_experiment(const ExperimentConfig& cfg, std::ostream* table_out) {
  RunReport rep;
  rep.output_dir = resolve_output_dir(cfg);
  try {
    Outputs out(rep.output_dir);
    const std::string config_text = to_config_text(cfg);
    {
      std::ofstream echo(out.path("config.resolved"), std::ios::binary);
      echo << config_text;
    }
    const std::string& e = cfg.experiment;
    if (e == "simulate") {
      do_simulate(cfg, out, false);
    } else if (e == "flat-baseline") {
      do_simulate(cfg, out, true);
    } else if (e == "speed-scan") {
      do_speed_scan(cfg, out);
    } else if (e == "wave-profile") {
      do_wave_profile(cfg, out);
    } else if (e == "bridge-check") {
      do_bridge_check(cfg, out);
    } else if (e == "fk-check") {
      do_fk_check(cfg, out);
    } else if (e == "theory") {
      do_theory(cfg, out, table_out);
    } else {
      throw ConfigError("unknown experiment '" + e + "'");
    }
    // The hash identifies the computation, so it ignores where results go.
    ExperimentConfig hashed = cfg;
    hashed.output_dir.clear();
    write_manifest(cfg, out, to_config_text(hashed));
    rep.files = out.files();
  } catch (const Error& err) {
    rep.exit_code = exit_code_for(err.kind());
    rep.error_line = error_line(cfg.experiment, err);
  } catch (const fs::filesystem_error& err) {
    rep.exit_code = 2;
    rep.error_line = "error: kind=io experiment=" + cfg.experiment + " message=" + quote(err.what());
  }
  return rep;
}

}  // namespace invasion
