#pragma once

#include <cstddef>
#include <vector>

namespace invasion {

/// Tabulated speed-sqrt(2) travelling wave of the scalar F-KPP equation,
/// centred so that omega(0) = 1/2, with fitted exponential tails used for
/// evaluation outside the stored range.
struct WaveProfile {
  std::vector<double> xs;     // uniform, symmetric around 0
  std::vector<double> omega;  // values in [0, 1]
  double tail_C = 0.0;        // omega(x) ~ tail_C * x * exp(-sqrt(2) x), x -> +inf
  double tail_c = 0.0;        // omega(x) ~ 1 - tail_c * exp((2 - sqrt(2)) x), x -> -inf
  double centring_error = 0.0;
  std::size_t monotonicity_violations = 0;
  int iterations = 0;         // refinement levels used
  double last_update = 0.0;   // sup-norm difference of the last two refinements

  double half_width() const { return xs.empty() ? 0.0 : xs.back(); }
  double dx() const { return xs.size() < 2 ? 0.0 : xs[1] - xs[0]; }
};

struct WaveOptions {
  double tol = 1e-6;
  double half_width = 50.0;
  double dx = 0.02;
  /// Extra length integrated beyond +-half_width.
  double pad = 10.0;
  /// Maximum number of step halvings.
  int max_iterations = 12;
};

/// Integrates the wave ODE along the unstable manifold of u = 1, halving the
/// step until successive profiles agree to `tol` in sup-norm, and recentres
/// so that omega(0) = 1/2. Throws DomainError for bad options and
/// ConvergenceError when the refinement does not settle.
WaveProfile compute_profile(double tol, double half_width);
WaveProfile compute_profile(const WaveOptions& options);

/// Total function: interpolates inside the table, tail formulas outside.
double evaluate(const WaveProfile& wave, double x);

struct TailFit {
  double tail_C = 0.0;
  double tail_c = 0.0;
  double right_slope = 0.0;     // fitted d/dx [log omega - log x]
  double left_slope = 0.0;      // fitted d/dx log(1 - omega)
  double right_residual = 0.0;  // max |omega / model - 1| on the right window
  double left_residual = 0.0;   // max |(1 - omega) / model - 1| on the left window
};

struct TailWindows {
  double right_lo = 15.0, right_hi = 25.0;
  double left_lo = -25.0, left_hi = -15.0;
};

/// Least-squares fit of both exponential tails. Coefficients are fitted
/// with the theoretical exponents held fixed; slopes are fitted freely.
TailFit check_tails(const WaveProfile& wave, const TailWindows& windows = {});

/// Bramson centring sqrt(2) t - 3/(2 sqrt(2)) ln t. Requires t >= 1.
double m_of_t(double t);

}  // namespace invasion
