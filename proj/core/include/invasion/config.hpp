#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "invasion/model.hpp"
#include "invasion/pde_solver.hpp"

namespace invasion {

/// Everything a single experiment needs. Parsed from flat `key = value`
/// files; lists are comma separated; `#` starts a comment.
struct ExperimentConfig {
  std::string experiment = "simulate";
  std::string output_dir;  // empty: INVASION_OUTPUT_DIR, then "."
  std::uint64_t seed = 1;
  unsigned workers = 0;

  // Model. Exactly one of the two blocks may be given in a file.
  std::optional<PhysicalParams> physical;
  ScaledParams scaled{};

  // Grid.
  double dx = 0.05;
  double cfl = 0.25;
  double window_len = 400.0;
  double behind_origin = 100.0;

  // PDE runs.
  double t_end = 200.0;
  double sample_dt = 0.5;
  double a_offset = 0.0;
  double margin = 60.0;
  std::size_t shift_cells = 20;
  VInit v_init = VInit::kTravellingWave;
  std::vector<double> snapshot_times;
  double window_fraction = 0.5;

  // Travelling wave.
  double wave_tol = 1e-6;
  double wave_half_width = 50.0;
  double wave_dx = 0.02;

  // Speed scan.
  std::vector<double> beta_list{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};

  // Bridge checks.
  std::string bridge_study = "both";  // tail, laplace, both
  double bridge_t = 5.0;
  double bridge_alpha = 0.6;
  double bridge_K = 0.0;
  std::vector<double> bridge_s{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> bridge_lambda{0.2, 0.3, 0.4, 0.5};
  std::uint64_t n_paths = 100000;
  std::size_t n_steps = 1000;

  // Feynman-Kac checks.
  double fk_t = 10.0;
  std::vector<double> fk_x;  // empty: panel around the w-front
  std::size_t fk_panel = 10;
  double fk_span = 3.0;
  std::uint64_t fk_n_paths = 100000;
  std::size_t fk_n_steps = 2000;
  double fk_frame_dt = 0.05;

  // Theory table.
  std::vector<double> theory_gamma{0.75};
  double beta_min = 0.0;
  double beta_max = 0.7;
  std::size_t steps = 8;

  /// Scaled parameters after rescaling the physical block, if present.
  ScaledParams resolved_scaled() const;
  Grid grid() const;
};

/// Throws ConfigError carrying the 1-based line of the offending entry.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Applies one `key = value` assignment (as from the command line).
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Full resolved configuration in the file format; parse_config of the
/// result reproduces `cfg`.
std::string to_config_text(const ExperimentConfig& cfg);

const std::vector<std::string>& config_keys();
const std::vector<std::string>& experiment_names();

}  // namespace invasion
