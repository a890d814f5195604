#include "invasion/travelling_wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "invasion/errors.hpp"

namespace invasion {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kLeftExp = 2.0 - kSqrt2;

// State (u, u') of 1/2 u'' + sqrt(2) u' + u(1-u) = 0. Left of the half level
// the solution is carried as phi = 1 - u so that the exponentially small
// distance to 1 keeps full relative precision.
struct Shot {
  double x0 = 0.0;
  double h = 0.0;
  std::vector<double> u, du;

  double at(double x) const {
    double pos = (x - x0) / h;
    const double last = static_cast<double>(u.size() - 1);
    pos = std::clamp(pos, 0.0, last);
    std::size_t j = static_cast<std::size_t>(pos);
    if (j >= u.size() - 1) j = u.size() - 2;
    const double s = pos - static_cast<double>(j);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * u[j] + (s3 - 2 * s2 + s) * h * du[j] +
           (-2 * s3 + 3 * s2) * u[j + 1] + (s3 - s2) * h * du[j + 1];
  }
};

// Second derivative for the phi form (sign = -1) and the u form (sign = +1):
// phi'' = -2 sqrt(2) phi' + 2 phi (1 - phi), u'' = -2 sqrt(2) u' - 2 u (1 - u).
inline double accel(double y, double dy, double sign) {
  return -2.0 * kSqrt2 * dy - sign * 2.0 * y * (1.0 - y);
}

void rk4(double& y, double& dy, double h, double sign) {
  const double k1y = dy, k1v = accel(y, dy, sign);
  const double k2y = dy + 0.5 * h * k1v, k2v = accel(y + 0.5 * h * k1y, dy + 0.5 * h * k1v, sign);
  const double k3y = dy + 0.5 * h * k2v, k3v = accel(y + 0.5 * h * k2y, dy + 0.5 * h * k2v, sign);
  const double k4y = dy + h * k3v, k4v = accel(y + h * k3y, dy + h * k3v, sign);
  y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
  dy += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
}

struct ShotResult {
  Shot shot;
  double xc = 0.0;  // position of the half-level crossing
};

// Integrates rightwards along the unstable manifold of u = 1. Rightward
// integration is stable: the parasitic mode at u = 1 decays and both modes
// at u = 0 decay at the same rate.
ShotResult shoot(double h, double reach_left, double reach_right) {
  constexpr double kPhiStart = 1e-200;
  Shot shot;
  shot.h = h;
  shot.x0 = 0.0;
  double y = kPhiStart, dy = kLeftExp * kPhiStart;
  bool phi_form = true;
  double xc = std::numeric_limits<double>::quiet_NaN();
  double x = 0.0;
  shot.u.push_back(1.0 - y);
  shot.du.push_back(-dy);
  for (std::size_t k = 1;; ++k) {
    const double y_prev = phi_form ? 1.0 - y : y;
    rk4(y, dy, h, phi_form ? -1.0 : 1.0);
    x = static_cast<double>(k) * h;
    if (phi_form && y >= 0.5) {
      phi_form = false;
      y = 1.0 - y;
      dy = -dy;
    }
    const double u_now = phi_form ? 1.0 - y : y;
    const double du_now = phi_form ? -dy : dy;
    shot.u.push_back(u_now);
    shot.du.push_back(du_now);
    if (std::isnan(xc) && u_now < 0.5) {
      xc = x - h * (0.5 - u_now) / (y_prev - u_now);
      if (xc - reach_left < 0.0) {
        throw ConvergenceError("compute_profile: shooting start too close to the front", 0.0);
      }
    }
    if (!std::isnan(xc) && x >= xc + reach_right + 2 * h) break;
    if (!(u_now >= 0.0) || !(du_now <= 0.0)) {
      throw ConvergenceError("compute_profile: shooting left the monotone branch", 0.0);
    }
  }
  // Newton refinement of the half-level crossing on the Hermite interpolant.
  for (int it = 0; it < 50; ++it) {
    const double pos = (xc - shot.x0) / h;
    const auto j = static_cast<std::size_t>(pos);
    const double slope = shot.du[j] + (pos - static_cast<double>(j)) * (shot.du[j + 1] - shot.du[j]);
    const double step = (shot.at(xc) - 0.5) / slope;
    xc -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return {std::move(shot), xc};
}

std::vector<double> sample(const ShotResult& r, const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::clamp(r.shot.at(xs[i] + r.xc), 0.0, 1.0);
  return out;
}

}  // namespace

WaveProfile compute_profile(double tol, double half_width) {
  WaveOptions opt;
  opt.tol = tol;
  opt.half_width = half_width;
  return compute_profile(opt);
}

WaveProfile compute_profile(const WaveOptions& opt) {
  if (!(opt.tol > 0.0)) throw DomainError("compute_profile: tol must be > 0");
  if (!(opt.half_width >= 30.0)) throw DomainError("compute_profile: half_width must be >= 30");
  if (!(opt.dx > 0.0) || !(opt.pad >= 0.0)) throw DomainError("compute_profile: bad dx or pad");

  const auto m = static_cast<std::size_t>(std::llround(opt.half_width / opt.dx));
  WaveProfile out;
  out.xs.resize(2 * m + 1);
  for (std::size_t i = 0; i <= 2 * m; ++i) {
    out.xs[i] = (static_cast<double>(i) - static_cast<double>(m)) * opt.dx;
  }
  const double reach = opt.half_width + opt.pad;

  // Halve the integration step until successive profiles agree within tol.
  double h = opt.dx / 4.0;
  ShotResult prev = shoot(h, reach, reach);
  std::vector<double> prev_omega = sample(prev, out.xs);
  double diff = std::numeric_limits<double>::infinity();
  int it = 1;
  for (; it < opt.max_iterations; ++it) {
    h *= 0.5;
    ShotResult next = shoot(h, reach, reach);
    std::vector<double> omega = sample(next, out.xs);
    diff = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) diff = std::max(diff, std::abs(omega[i] - prev_omega[i]));
    prev = std::move(next);
    prev_omega = std::move(omega);
    if (diff < opt.tol) break;
  }
  if (!(diff < opt.tol)) {
    std::ostringstream os;
    os << "compute_profile: no convergence after " << opt.max_iterations
       << " refinements (last sup-norm difference " << diff << ")";
    throw ConvergenceError(os.str(), diff);
  }
  out.omega = std::move(prev_omega);
  out.omega[m] = std::clamp(out.omega[m], 0.0, 1.0);
  out.centring_error = std::abs(out.omega[m] - 0.5);
  for (std::size_t i = 1; i < out.omega.size(); ++i) {
    if (out.omega[i] > out.omega[i - 1]) ++out.monotonicity_violations;
  }
  out.iterations = it + 1;
  out.last_update = diff;

  // Tail coefficients are matched at the table ends so evaluate() is continuous.
  const double xr = out.xs.back(), xl = out.xs.front();
  out.tail_C = out.omega.back() * std::exp(kSqrt2 * xr) / xr;
  out.tail_c = (1.0 - out.omega.front()) * std::exp(-kLeftExp * xl);
  return out;
}

double evaluate(const WaveProfile& wave, double x) {
  if (std::isnan(x)) return x;
  const auto& xs = wave.xs;
  if (xs.size() < 2) return x <= 0.0 ? 1.0 : 0.0;
  if (x > xs.back()) {
    return std::clamp(wave.tail_C * x * std::exp(-kSqrt2 * x), 0.0, 1.0);
  }
  if (x < xs.front()) {
    return std::clamp(1.0 - wave.tail_c * std::exp(kLeftExp * x), 0.0, 1.0);
  }
  const double h = xs[1] - xs[0];
  const double pos = (x - xs.front()) / h;
  std::size_t j = static_cast<std::size_t>(pos);
  if (j >= xs.size() - 1) j = xs.size() - 2;
  const double s = pos - static_cast<double>(j);
  return wave.omega[j] + s * (wave.omega[j + 1] - wave.omega[j]);
}

TailFit check_tails(const WaveProfile& wave, const TailWindows& win) {
  struct Acc {
    std::size_t n = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    void add(double x, double y) {
      ++n;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double slope() const {
      const double d = static_cast<double>(n) * sxx - sx * sx;
      return (static_cast<double>(n) * sxy - sx * sy) / d;
    }
  };
  Acc right, left;
  double right_log_c = 0.0, left_log_c = 0.0;
  for (std::size_t i = 0; i < wave.xs.size(); ++i) {
    const double x = wave.xs[i];
    const double w = wave.omega[i];
    if (x >= win.right_lo && x <= win.right_hi) {
      if (!(w > 0.0)) throw DomainError("check_tails: non-positive omega in right fit window");
      const double y = std::log(w) - std::log(x);
      right.add(x, y);
      right_log_c += y + kSqrt2 * x;
    }
    if (x >= win.left_lo && x <= win.left_hi) {
      if (!(w < 1.0)) throw DomainError("check_tails: 1 - omega non-positive in left fit window");
      const double y = std::log1p(-w);
      left.add(x, y);
      left_log_c += y - kLeftExp * x;
    }
  }
  if (right.n < 3 || left.n < 3) throw DomainError("check_tails: fit windows outside the stored grid");

  TailFit fit;
  fit.tail_C = std::exp(right_log_c / static_cast<double>(right.n));
  fit.tail_c = std::exp(left_log_c / static_cast<double>(left.n));
  fit.right_slope = right.slope();
  fit.left_slope = left.slope();
  for (std::size_t i = 0; i < wave.xs.size(); ++i) {
    const double x = wave.xs[i];
    const double w = wave.omega[i];
    if (x >= win.right_lo && x <= win.right_hi) {
      const double model = fit.tail_C * x * std::exp(-kSqrt2 * x);
      fit.right_residual = std::max(fit.right_residual, std::abs(w / model - 1.0));
    }
    if (x >= win.left_lo && x <= win.left_hi) {
      const double model = fit.tail_c * std::exp(kLeftExp * x);
      fit.left_residual = std::max(fit.left_residual, std::abs((1.0 - w) / model - 1.0));
    }
  }
  return fit;
}

double m_of_t(double t) {
  if (!(t >= 1.0)) throw DomainError("m_of_t: requires t >= 1");
  return kSqrt2 * t - 3.0 / (2.0 * kSqrt2) * std::log(t);
}

}  // namespace invasion
