#include "invasion/speed_theory.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "invasion/errors.hpp"

namespace invasion {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

const char* to_string(Regime r) {
  return r == Regime::kAccelerated ? "accelerated" : "flat_equivalent";
}

double u_star(const ScaledParams& s) {
  return kSqrt2 - s.beta_t * (1.0 + std::sqrt(1.0 - s.gamma_t)) / (kSqrt2 * s.gamma_t);
}

double flat_speed(const ScaledParams& s) { return std::sqrt(2.0 * (s.gamma_t - s.beta_t)); }

double beta_star(double gamma_t) {
  if (!(gamma_t > 0.0 && gamma_t < 1.0)) throw DomainError("beta_star: gamma_t must lie in (0, 1)");
  return 2.0 * (gamma_t + std::sqrt(1.0 - gamma_t) - 1.0);
}

SpeedPrediction predict(const ScaledParams& s) {
  SpeedPrediction p;
  p.branch1 = u_star(s);
  p.branch2 = flat_speed(s);
  p.beta_star = beta_star(s.gamma_t);
  p.u_c_as_stated = std::max(p.branch1, p.branch2);
  const bool accelerated = s.beta_t <= p.beta_star;
  p.u_c_regime = accelerated ? p.branch1 : p.branch2;
  p.regime = accelerated ? Regime::kAccelerated : Regime::kFlatEquivalent;
  return p;
}

bool case1_valid(const ScaledParams& s) {
  const double gap = kSqrt2 - u_star(s);
  return 2.0 * (1.0 - s.gamma_t) > gap * gap;
}

double x1_star(const ScaledParams& s, double t) {
  return kSqrt2 * (1.0 - s.beta_t * (1.0 + std::sqrt(1.0 - s.gamma_t)) / (2.0 * s.gamma_t)) * t;
}

double x2_star(const ScaledParams& s, double t) { return flat_speed(s) * t; }

double s_star(double u, double gamma_t, double t) {
  if (!(u > 0.0 && u < kSqrt2)) throw DomainError("s_star: u must lie in (0, sqrt 2)");
  return std::max(0.0, t * (1.0 - (kSqrt2 - u) / std::sqrt(2.0 * (1.0 - gamma_t))));
}

double decay_exponent(double u, const ScaledParams& s) {
  const double a = std::sqrt(2.0 * (1.0 - s.gamma_t));
  double r = 0.5 * u * u - (s.gamma_t - s.beta_t);
  if (u > kSqrt2 * (1.0 - std::sqrt(1.0 - s.gamma_t))) {
    const double d = kSqrt2 - u - a;
    r -= 0.5 * d * d;
  }
  return r;
}

TipOffsets tip_offsets(const ScaledParams& s, double t, double delta) {
  if (!(s.beta_t < beta_star(s.gamma_t))) {
    throw PreconditionError("tip_offsets: requires beta_t < beta_star(gamma_t)");
  }
  if (!(t > 1.0)) throw DomainError("tip_offsets: requires t > 1");
  const double c_plus = 1.0 / (2.0 - kSqrt2);
  const double c_minus = kSqrt2;
  const double root = std::sqrt(1.0 - s.gamma_t);
  const double denom = kSqrt2 * (1.0 - root);
  const double lt = std::log(t);
  TipOffsets z;
  z.z_plus = (c_plus * root + 0.5 + delta) / denom * lt;
  z.z_minus = -(c_minus * std::sqrt(2.0 * (1.0 - s.gamma_t)) * (1.0 + kSqrt2) - 0.5) / denom * lt;
  return z;
}

double laplace_approx(const std::function<double(double)>& f, double f_second_at_max,
                      const std::function<double(double, double)>& P, double s_star, double t) {
  if (!(f_second_at_max < 0.0)) throw DomainError("laplace_approx: f'' at the maximiser must be < 0");
  return std::sqrt(2.0 * std::numbers::pi / (-t * f_second_at_max)) * P(s_star, t) *
         std::exp(t * f(s_star));
}

double laplace_boundary_approx(const std::function<double(double)>& f, double f_prime_at_edge,
                               double c, double delta, double y, double t) {
  if (!(f_prime_at_edge > 0.0)) {
    throw DomainError("laplace_boundary_approx: f'(y) must be > 0 (f increasing away from y)");
  }
  return std::tgamma(1.0 + delta) * c * std::exp(-t * f(y)) / std::pow(t * f_prime_at_edge, 1.0 + delta);
}

SpeedFit fit_speed(std::span<const double> times, std::span<const double> x, double window_fraction) {
  if (times.size() != x.size()) throw FitError("fit_speed: times and positions differ in length");
  if (times.empty()) throw FitError("fit_speed: empty track");
  if (!(window_fraction >= 0.0 && window_fraction < 1.0)) {
    throw FitError("fit_speed: window_fraction must lie in [0, 1)");
  }
  const double t_hi = times.back();
  const double t_lo = window_fraction * t_hi;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t_lo && times[i] > 0.0 && std::isfinite(x[i])) idx.push_back(i);
  }
  if (idx.size() < 20) {
    std::ostringstream os;
    os << "fit_speed: " << idx.size() << " samples in [" << t_lo << ", " << t_hi << "], need 20";
    throw FitError(os.str());
  }
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd A(m, 3);
  Eigen::VectorXd b(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double t = times[idx[static_cast<std::size_t>(r)]];
    A(r, 0) = t;
    A(r, 1) = std::log(t);
    A(r, 2) = 1.0;
    b(r) = x[idx[static_cast<std::size_t>(r)]];
  }
  const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd res = A * coef - b;
  SpeedFit fit;
  fit.u_hat = coef(0);
  fit.c_log = coef(1);
  fit.intercept = coef(2);
  fit.rms_residual = std::sqrt(res.squaredNorm() / static_cast<double>(m));
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.n_samples = idx.size();
  return fit;
}

SpeedFit fit_speed(const FrontTrack& track, FrontField which, double window_fraction) {
  return fit_speed(track.times, which == FrontField::kV ? track.x_front_v : track.x_front_w,
                   window_fraction);
}

}  // namespace invasion
