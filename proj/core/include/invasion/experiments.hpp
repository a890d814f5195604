#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "invasion/config.hpp"
#include "invasion/errors.hpp"
#include "invasion/feynman_kac.hpp"
#include "invasion/speed_theory.hpp"

namespace invasion {

struct ScanOptions {
  double t_end = 200.0;
  double sample_dt = 0.5;
  double window_fraction = 0.5;
  double a = 0.0;
  unsigned workers = 0;
};

/// One row per beta~: w-front speeds of the coupled run and the flat
/// baseline, joined with the predictions. Failed rows carry NaN speeds and
/// the error text; the scan continues.
struct ScanRow {
  double beta_t = 0.0;
  double u_meas_coupled = 0.0;
  double u_meas_flat = 0.0;
  SpeedPrediction prediction;
  std::string error;
};

/// Rows are computed in parallel and returned in the order of `betas`.
std::vector<ScanRow> speed_scan(double gamma_t, const std::vector<double>& betas, const Grid& grid,
                                const WaveProfile& wave, const ScanOptions& opt);

struct FkCheckRow {
  double pde_w = 0.0;
  FkPanelPoint fk;
  CrudeBounds crude;
};

struct FkCheckOptions {
  double t = 10.0;
  std::vector<double> xs;  // empty: `panel` points over front +- span
  std::size_t panel = 10;
  double span = 3.0;
  double frame_dt = 0.05;
  FkOptions fk;
};

/// Runs the coupled PDE to t with stored w frames, then evaluates the three
/// Feynman-Kac estimators and the closed-form bounds on the panel.
std::vector<FkCheckRow> fk_check(const ScaledParams& s, const Grid& grid, const WaveProfile& wave,
                                 const FkCheckOptions& opt);

struct RunReport {
  int exit_code = 0;
  std::string output_dir;
  std::vector<std::string> files;
  std::string error_line;  // empty on success
};

/// Executes cfg.experiment, writing CSVs, `config.resolved` and `manifest`
/// into the output directory. Library errors are reported through the exit
/// code (2 configuration, 3 numerical) and a one-line `error:` record.
/// `table_out`, when given, also receives the theory table.
RunReport run_experiment(const ExperimentConfig& cfg, std::ostream* table_out = nullptr);

std::string resolve_output_dir(const ExperimentConfig& cfg);
int exit_code_for(ErrorKind kind);
/// `error: kind=<kind> experiment=<name> line=<n> message="<text>"`.
std::string error_line(std::string_view experiment, const Error& e);
std::uint64_t fnv1a64(std::string_view data);
std::string version_string();

}  // namespace invasion
