#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "invasion/model.hpp"
#include "invasion/travelling_wave.hpp"

namespace invasion {

/// Front positions sampled during a run, in the fixed frame. Entries are NaN
/// for a field that is not tracked (v in flat-background runs, w in scalar runs).
struct FrontTrack {
  std::vector<double> times;
  std::vector<double> x_front_v;
  std::vector<double> x_front_w;
  std::vector<std::uint64_t> clamp_events;  // cumulative, per sample
  double level_v = 0.5;
  double level_w = 0.0;

  std::size_t size() const noexcept { return times.size(); }
};

/// Dirichlet values imposed through ghost nodes at both ends of the window.
struct BoundaryValues {
  double left_v = 1.0, left_w = 0.0;
  double right_v = 0.0, right_w = 0.0;

  /// Left end at the coexistence fixpoint, right end at (0, 0).
  static BoundaryValues standard(const ScaledParams& s) {
    return {1.0, s.stable_w(), 0.0, 0.0};
  }
};

enum class VMode {
  kEvolve,  // full coupled system
  kFrozen,  // v held at 1 everywhere (flat background)
};

/// Explicit Euler stepper with reusable scratch buffers.
class Stepper {
 public:
  Stepper(const ScaledParams& s, const Grid& grid, BoundaryValues bc, VMode mode = VMode::kEvolve);

  /// Advances `state` by one time step. Throws NumericalBlowup on NaN/Inf.
  void advance(FieldState& state);

  const Grid& grid() const noexcept { return grid_; }
  const BoundaryValues& boundary() const noexcept { return bc_; }

 private:
  ScaledParams s_;
  Grid grid_;
  BoundaryValues bc_;
  VMode mode_;
  std::vector<double> v_next_, w_next_;
};

/// One explicit Euler step with the standard boundary values.
FieldState step(const FieldState& state, const ScaledParams& s, const Grid& grid);
FieldState step(const FieldState& state, const ScaledParams& s, const Grid& grid,
                const BoundaryValues& bc);

/// Rightmost level crossing, linearly interpolated; node i sits at
/// x_left + i*dx. Throws FrontLost when the level is never crossed.
double front_position(std::span<const double> field, double level, double x_left, double dx);
double front_position(std::span<const double> field, double level, const Grid& grid);

/// Translates the window by whole multiples of `shift_cells` cells until the
/// front of `key_field` is at least `margin` from the right edge. New cells
/// take the right boundary values. Returns the number of cells shifted.
std::size_t shift_window(FieldState& state, const Grid& grid, double margin,
                         std::size_t shift_cells, const BoundaryValues& bc,
                         bool key_on_w = false, double level = 0.5);

enum class VInit { kTravellingWave, kHeaviside };

struct Snapshot {
  double time = 0.0;
  std::vector<double> x, v, w;
};

/// Frames of w kept for later interpolation in (time, x).
struct WTrajectory {
  std::vector<double> times;
  std::vector<double> x_left;  // fixed-frame position of node 0, per frame
  std::vector<std::vector<double>> w;
  double dx = 0.0;
};

struct RunOptions {
  double t_end = 200.0;
  double sample_dt = 0.5;
  double a = 0.0;
  double margin = 60.0;
  std::size_t shift_cells = 20;
  VInit v_init = VInit::kTravellingWave;
  bool with_mutant = true;  // false: w identically 0, scalar F-KPP for v
  VMode v_mode = VMode::kEvolve;
  std::vector<double> snapshot_times;
  /// Fixed-frame points whose w values are logged at every sample.
  std::vector<double> probe_points;
  /// Store w frames every `trajectory_dt` (0 disables).
  double trajectory_dt = 0.0;
};

struct RunResult {
  FrontTrack track;
  std::vector<Snapshot> snapshots;
  std::vector<std::vector<double>> probe_w;  // [probe][sample]
  WTrajectory trajectory;
  FieldState final_state;
  Grid final_grid;
};

/// Full coupled run (or its variants selected in RunOptions).
RunResult simulate(const ScaledParams& s, const Grid& grid, const WaveProfile& wave,
                   const RunOptions& opt);

/// Coupled run from v(0,x) = omega(x + a), w(0,x) = (1 - beta~/gamma~) 1{x <= 0}.
FrontTrack run(const ScaledParams& s, const Grid& grid, double t_end, double sample_dt,
               double a, const WaveProfile& wave);

/// v frozen at 1, only the w-front tracked.
FrontTrack run_flat_background(const ScaledParams& s, const Grid& grid, double t_end,
                               double sample_dt);

}  // namespace invasion
