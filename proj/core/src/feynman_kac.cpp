#include "invasion/feynman_kac.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "invasion/errors.hpp"
#include "invasion/parallel.hpp"

namespace invasion {

WLookup::WLookup(WTrajectory trajectory, const ScaledParams& s)
    : traj_(std::move(trajectory)), w_stable_(s.stable_w()) {
  if (traj_.times.empty()) throw ConfigError("WLookup: empty trajectory");
  if (traj_.times.size() != traj_.w.size() || traj_.times.size() != traj_.x_left.size()) {
    throw ConfigError("WLookup: inconsistent trajectory arrays");
  }
  for (std::size_t k = 1; k < traj_.times.size(); ++k) {
    if (!(traj_.times[k] > traj_.times[k - 1])) throw ConfigError("WLookup: frame times must increase");
  }
}

void WLookup::bracket(double tau, std::size_t& frame, double& weight) const {
  const auto& ts = traj_.times;
  if (ts.size() == 1 || tau <= ts.front()) {
    frame = 0;
    weight = 0.0;
    return;
  }
  if (tau >= ts.back()) {
    frame = ts.size() - 2;
    weight = 1.0;
    return;
  }
  const auto it = std::upper_bound(ts.begin(), ts.end(), tau);
  frame = static_cast<std::size_t>(it - ts.begin()) - 1;
  weight = (tau - ts[frame]) / (ts[frame + 1] - ts[frame]);
}

double WLookup::at_frame(std::size_t k, double x) const {
  const auto& f = traj_.w[k];
  const double pos = (x - traj_.x_left[k]) / traj_.dx;
  if (pos < 0.0) return w_stable_;
  const double last = static_cast<double>(f.size() - 1);
  if (pos >= last) return pos == last ? f.back() : 0.0;
  const auto j = static_cast<std::size_t>(pos);
  const double s = pos - static_cast<double>(j);
  return f[j] + s * (f[j + 1] - f[j]);
}

double WLookup::operator()(double tau, double x) const {
  std::size_t k = 0;
  double wt = 0.0;
  bracket(tau, k, wt);
  double v = at_frame(k, x);
  if (wt > 0.0) v += wt * (at_frame(k + 1, x) - v);
  return std::clamp(v, 0.0, w_stable_);
}

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct FkTriple {
  std::array<RunningStats, 3> st;  // full, upper, lower
};

FkPanelPoint fk_core(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                     const WLookup* wl, const FkOptions& opt) {
  if (!(t > 0.0)) throw DomainError("feynman_kac: t must be > 0");
  if (opt.n_paths < 1) throw DomainError("feynman_kac: n_paths must be >= 1");
  if (wl != nullptr && t > wl->t_max() * (1.0 + 1e-12)) {
    throw PreconditionError("feynman_kac: w lookup does not cover [0, t]");
  }
  const std::size_t n = opt.n_steps;
  const BridgeSampler sampler(t, n);
  const double ds = t / static_cast<double>(n);
  const double sqrt_t = std::sqrt(t);
  const double p_support = normal_cdf(-x / sqrt_t);
  const double weight = s.stable_w() * p_support;
  const double base = 1.0 - s.beta_t;
  const double cv = 1.0 - s.gamma_t;
  const double cw = s.gamma_t;

  // Per-step time geometry, shared by all paths.
  std::vector<double> frac(n), wave_shift(n), wt(n);
  std::vector<std::size_t> frame(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sm = (static_cast<double>(i) + 0.5) * ds;
    frac[i] = sm / t;
    wave_shift[i] = opt.a - kSqrt2 * (t - sm);
    if (wl != nullptr) wl->bracket(t - sm, frame[i], wt[i]);
  }

  const std::size_t n_chunks = static_cast<std::size_t>((opt.n_paths + kPathChunk - 1) / kPathChunk);
  auto chunks = parallel_map<FkTriple>(n_chunks, opt.workers, [&](std::size_t c) {
    FkTriple acc;
    std::vector<double> z(n + 1);
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kPathChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(opt.n_paths, lo + kPathChunk);
    for (std::uint64_t path = lo; path < hi; ++path) {
      Philox rng(opt.seed, path);
      // Truncated Gaussian endpoint y <= 0 by inversion.
      const double q = rng.uniform() * p_support;
      const double y = x - sqrt_t * kSqrt2 * boost::math::erfc_inv(2.0 * q);
      sampler.sample(rng, z.data());
      double i_full = 0.0, i_up = 0.0, i_low = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = x + (y - x) * frac[i] + 0.5 * (z[i] + z[i + 1]);
        const double om = evaluate(wave, p + wave_shift[i]);
        const double r_up = base - cv * om;
        i_up += r_up;
        i_low += base - om;
        if (wl != nullptr) {
          double wv = wl->at_frame(frame[i], p);
          if (wt[i] > 0.0) wv += wt[i] * (wl->at_frame(frame[i] + 1, p) - wv);
          i_full += r_up - cw * wv;
        }
      }
      i_full *= ds;
      i_up *= ds;
      i_low *= ds;
      if (i_up > 700.0) {
        std::ostringstream os;
        os << "feynman_kac: path exponent " << i_up << " exceeds 700; use a log-domain estimator";
        throw NumericalBlowup(os.str(), -1);
      }
      acc.st[0].add(weight * std::exp(i_full));
      acc.st[1].add(weight * std::exp(i_up));
      acc.st[2].add(weight * std::exp(i_low));
    }
    return acc;
  });
  std::array<RunningStats, 3> tot;
  for (const auto& ch : chunks) {
    for (int k = 0; k < 3; ++k) tot[k].merge(ch.st[k]);
  }
  auto est = [&](const RunningStats& r) { return McEstimate{r.mean, r.std_error(), r.n, opt.seed}; };
  FkPanelPoint out;
  out.t = t;
  out.x = x;
  out.full = est(tot[0]);
  if (wl == nullptr) out.full.mean = out.full.std_error = std::numeric_limits<double>::quiet_NaN();
  out.upper = est(tot[1]);
  out.lower = est(tot[2]);
  return out;
}

}  // namespace

FkPanelPoint fk_all(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                    const WLookup& wlook, const FkOptions& opt) {
  return fk_core(t, x, s, wave, &wlook, opt);
}

McEstimate fk_estimate(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                       const WLookup& wlook, const FkOptions& opt) {
  return fk_core(t, x, s, wave, &wlook, opt).full;
}

McEstimate fk_upper_estimate(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                             const FkOptions& opt) {
  return fk_core(t, x, s, wave, nullptr, opt).upper;
}

McEstimate fk_lower_estimate(double t, double x, const ScaledParams& s, const WaveProfile& wave,
                             const FkOptions& opt) {
  return fk_core(t, x, s, wave, nullptr, opt).lower;
}

CrudeBounds crude_bounds(double t, double x, const ScaledParams& s) {
  if (!(t > 0.0)) throw DomainError("crude_bounds: t must be > 0");
  CrudeBounds b;
  const double m = s.stable_w();
  b.lower = m * normal_cdf(-x / std::sqrt(t));
  b.upper = b.lower * std::exp((1.0 - s.beta_t) * t);
  if (x > 0.0) {
    const double mills = std::sqrt(t / (2.0 * std::numbers::pi)) * std::exp(-x * x / (2.0 * t)) / x;
    b.tail_lower = m * mills * (1.0 - t / (x * x));
    b.tail_upper = m * mills * std::exp((1.0 - s.beta_t) * t);
  } else {
    b.tail_lower = b.tail_upper = std::numeric_limits<double>::quiet_NaN();
  }
  return b;
}

}  // namespace invasion
