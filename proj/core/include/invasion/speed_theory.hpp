#pragma once

#include <functional>
#include <span>

#include "invasion/model.hpp"
#include "invasion/pde_solver.hpp"

namespace invasion {

enum class Regime { kAccelerated, kFlatEquivalent };
const char* to_string(Regime r);

struct SpeedPrediction {
  double branch1 = 0.0;         // u*
  double branch2 = 0.0;         // sqrt(2 (gamma~ - beta~))
  double beta_star = 0.0;
  double u_c_as_stated = 0.0;   // max(branch1, branch2)
  double u_c_regime = 0.0;      // branch1 if beta~ <= beta*, else branch2
  Regime regime = Regime::kAccelerated;
};

/// sqrt(2) - beta~ (1 + sqrt(1 - gamma~)) / (sqrt(2) gamma~).
double u_star(const ScaledParams& s);
/// sqrt(2 (gamma~ - beta~)).
double flat_speed(const ScaledParams& s);
/// 2 (gamma~ + sqrt(1 - gamma~) - 1). Throws DomainError unless 0 < gamma~ < 1.
double beta_star(double gamma_t);
SpeedPrediction predict(const ScaledParams& s);

/// True when the branch-1 speed satisfies 2 (1 - gamma~) > (sqrt(2) - u*)^2.
bool case1_valid(const ScaledParams& s);

/// Position where w starts to decay, and the flat-background front position.
double x1_star(const ScaledParams& s, double t);
double x2_star(const ScaledParams& s, double t);

/// Optimal time t (1 - (sqrt(2) - u) / sqrt(2 (1 - gamma~))), clamped at 0.
/// Throws DomainError unless 0 < u < sqrt(2).
double s_star(double u, double gamma_t, double t);

/// Exponential decay rate of w(t, u t); negative values mean growth.
double decay_exponent(double u, const ScaledParams& s);

struct TipOffsets {
  double z_plus = 0.0;
  double z_minus = 0.0;
};

/// Offsets of the tip of the wave, both proportional to ln t. Throws
/// PreconditionError unless beta~ < beta*, DomainError unless t > 1.
TipOffsets tip_offsets(const ScaledParams& s, double t, double delta = 0.1);

/// sqrt(2 pi / (-t f''(s*))) P(s*, t) exp(t f(s*)). Throws DomainError when
/// f''(s*) >= 0.
double laplace_approx(const std::function<double(double)>& f, double f_second_at_max,
                      const std::function<double(double, double)>& P, double s_star, double t);

/// Gamma(1 + delta) c exp(-t f(y)) / (t f'(y))^(1 + delta). Throws
/// DomainError when f'(y) <= 0.
double laplace_boundary_approx(const std::function<double(double)>& f, double f_prime_at_edge,
                               double c, double delta, double y, double t);

struct SpeedFit {
  double u_hat = 0.0;
  double c_log = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  std::size_t n_samples = 0;
};

enum class FrontField { kV, kW };

/// Least squares x(t) = u t + c ln t + d over [window_fraction t_hi, t_hi].
/// Throws FitError with fewer than 20 usable samples.
SpeedFit fit_speed(const FrontTrack& track, FrontField which, double window_fraction = 0.5);
SpeedFit fit_speed(std::span<const double> times, std::span<const double> x,
                   double window_fraction = 0.5);

}  // namespace invasion
