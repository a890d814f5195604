#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "invasion/travelling_wave.hpp"

namespace invasion {

/// Biological parameters of the two-type system (rates alpha, beta, gamma and
/// carrying capacity K). Admissible when alpha > gamma > beta/K >= 0.
struct PhysicalParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.5;
  double carrying_capacity = 1.0;
};

/// Reduced parameters (gamma~, beta~) with 1 > gamma~ > beta~ >= 0.
struct ScaledParams {
  double gamma_t = 0.75;
  double beta_t = 0.1;

  /// Mutant mass of the stable coexistence fixpoint, 1 - beta~/gamma~.
  double stable_w() const noexcept { return 1.0 - beta_t / gamma_t; }
};

/// Throws ConstraintViolation naming the first failed inequality.
void validate(const ScaledParams& s);
ScaledParams make_scaled(double gamma_t, double beta_t);

/// gamma~ = gamma/alpha, beta~ = beta/(alpha K). beta~ is evaluated as
/// (beta/alpha)/K so that rescale(a,b,g,K) == rescale(1,b/a,g/a,K) bitwise.
ScaledParams rescale(const PhysicalParams& p);

/// True when beta~ is within `relative_gap` of gamma~ (stable mutant mass -> 0).
bool is_near_degenerate(const ScaledParams& s, double relative_gap = 1e-3);

enum class FixpointLabel { kExtinct, kUnphysical, kResidentOnly, kCoexistence };
enum class Stability { kStable, kUnstable, kUnphysical };

struct Fixpoint {
  double v_val;
  double w_val;
  FixpointLabel label;
  Stability stability;
};

const char* to_string(FixpointLabel label);
const char* to_string(Stability stability);

/// The four spatially constant solutions, in the order
/// extinct, unphysical, resident_only, coexistence.
std::array<Fixpoint, 4> fixpoints(const ScaledParams& s);

/// Reaction terms of the coupled system.
inline double v_reaction(double v) noexcept { return v * (1.0 - v); }
inline double w_growth_rate(const ScaledParams& s, double v, double w) noexcept {
  return 1.0 - s.beta_t - (1.0 - s.gamma_t) * v - s.gamma_t * w;
}
inline double w_reaction(const ScaledParams& s, double v, double w) noexcept {
  return w_growth_rate(s, v, w) * w;
}

inline constexpr double kDefaultCflMax = 0.25;

/// Uniform node grid. Node i sits at x_left + i * dx; dt is derived from
/// cfl = dt / dx^2.
struct Grid {
  double x_left = 0.0;
  double dx = 0.05;
  std::size_t n_cells = 0;
  double dt = 0.0;

  double cfl() const noexcept { return dt / (dx * dx); }
  double x_at(std::size_t i) const noexcept {
    return x_left + static_cast<double>(i) * dx;
  }
  double x_right() const noexcept { return x_at(n_cells - 1); }

  /// Throws ConfigError when dx <= 0, n_cells < 3, cfl <= 0 or cfl > cfl_max.
  static Grid make(double x_left, double dx, std::size_t n_cells, double cfl,
                   double cfl_max = kDefaultCflMax);

  /// Window of `window_len` units starting `behind_origin` behind the
  /// origin, offset by half a cell so that x = 0 falls between two nodes.
  static Grid make_window(double window_len, double dx, double cfl,
                          double behind_origin);
  static Grid make_default();
};

/// Discretised (v, w) on a window that may have been translated
/// `shifted_cells` cells to the right of its initial placement.
struct FieldState {
  std::vector<double> v;
  std::vector<double> w;
  double time = 0.0;
  double window_offset = 0.0;  // fixed-frame position of node 0
  std::int64_t step_index = 0;
  std::int64_t shifted_cells = 0;
  std::uint64_t clamp_events = 0;

  std::size_t size() const noexcept { return v.size(); }
};

/// v(0,x) = omega(x + a), w(0,x) = (1 - beta~/gamma~) 1{x <= 0}.
/// Throws ConfigError when x = 0 is not strictly inside the grid.
FieldState initial_state(const Grid& grid, const ScaledParams& s,
                         const WaveProfile& wave, double a);

}  // namespace invasion
