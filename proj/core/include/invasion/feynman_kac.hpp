#pragma once

#include <cstdint>
#include <vector>

#include "invasion/bridge_lab.hpp"
#include "invasion/model.hpp"
#include "invasion/pde_solver.hpp"
#include "invasion/travelling_wave.hpp"

namespace invasion {

/// w(tau, x) from stored PDE frames, bilinear in (tau, x). Left of a frame's
/// window w takes the stable value, right of it 0.
class WLookup {
 public:
  WLookup(WTrajectory trajectory, const ScaledParams& s);

  double operator()(double tau, double x) const;

  double t_max() const noexcept { return traj_.times.empty() ? 0.0 : traj_.times.back(); }
  const WTrajectory& trajectory() const noexcept { return traj_; }

  /// Locates tau between frames: lower frame index and weight of the upper one.
  void bracket(double tau, std::size_t& frame, double& weight) const;
  double at_frame(std::size_t frame, double x) const;

 private:
  WTrajectory traj_;
  double w_stable_;
};

struct FkOptions {
  double a = 0.0;
  std::uint64_t n_paths = 100000;
  std::size_t n_steps = 2000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

/// The three estimators of w(t, x) from one set of common random numbers.
/// All use the endpoint law y ~ N(x, t) restricted to the support y <= 0 of
/// w(0, .): y is drawn from the truncated Gaussian and the weight carries
/// P(y <= 0) = Phi(-x / sqrt t).
struct FkPanelPoint {
  double t = 0.0, x = 0.0;
  McEstimate full;   // exp of int (1 - b - (1 - g) omega - g w)
  McEstimate upper;  // gamma~ w term dropped
  McEstimate lower;  // coefficient 1 on omega
};

FkPanelPoint fk_all(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                    const WLookup& wlook, const FkOptions& opt);

McEstimate fk_estimate(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                       const WLookup& wlook, const FkOptions& opt);
McEstimate fk_upper_estimate(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                             const FkOptions& opt);
McEstimate fk_lower_estimate(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                             const FkOptions& opt);

struct CrudeBounds {
  double lower = 0.0;       // (1 - b/g) Phi(-x / sqrt t)
  double upper = 0.0;       // lower * exp((1 - b) t)
  double tail_lower = 0.0;  // Mills-ratio forms for x > 0 (NaN otherwise)
  double tail_upper = 0.0;
};

CrudeBounds crude_bounds(double t, double x, const ScaledParams& s);

}  // namespace invasion
