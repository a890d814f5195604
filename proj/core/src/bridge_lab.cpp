#include "invasion/bridge_lab.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "invasion/errors.hpp"
#include "invasion/parallel.hpp"

namespace invasion {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr std::uint64_t kAuxStream = 1ull << 63;
constexpr std::uint64_t kAltStream = 1ull << 62;

// Views over a raw path buffer of n + 1 values on [0, t].
double occupation_raw(const double* z, std::size_t n, double t, double alpha, double K) {
  const double ds = t / static_cast<double>(n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    count += static_cast<std::size_t>(z[i] >= alpha * (static_cast<double>(i) * ds) + K);
  }
  return static_cast<double>(count) * ds;
}

double occupation_below_raw(const double* z, std::size_t n, double t, double b) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += static_cast<std::size_t>(z[i] <= -b);
  return static_cast<double>(count) * (t / static_cast<double>(n));
}

double last_crossing_raw(const double* z, std::size_t n, double t, double alpha, double K) {
  const double ds = t / static_cast<double>(n);
  for (std::size_t i = n + 1; i-- > 0;) {
    if (z[i] >= alpha * (static_cast<double>(i) * ds) + K) return static_cast<double>(i) * ds;
  }
  return 0.0;
}

// Exponent 2 d_i d_{i+1} / ds beyond which a sub-grid touch has
// probability below e^-40 and is ignored.
constexpr double kTouchCutoff = 40.0;

double last_crossing_refined_raw(const double* z, std::size_t n, double t, double alpha, double K,
                                 Philox& rng) {
  const double ds = t / static_cast<double>(n);
  auto dist = [&](std::size_t i) { return alpha * (static_cast<double>(i) * ds) + K - z[i]; };
  double d_right = dist(n);
  if (d_right <= 0.0) return t;
  for (std::size_t j = n; j-- > 0;) {
    const double d_left = dist(j);
    if (d_left <= 0.0) return (static_cast<double>(j) + 0.5) * ds;
    const double e = 2.0 * d_left * d_right / ds;
    if (e < kTouchCutoff && rng.uniform() < std::exp(-e)) return (static_cast<double>(j) + 0.5) * ds;
    d_right = d_left;
  }
  return 0.0;
}

double crossing_given_grid_raw(const double* z, std::size_t n, double t, double alpha, double K) {
  const double ds = t / static_cast<double>(n);
  double log_miss = 0.0;
  double d_left = K - z[0];
  if (d_left <= 0.0) return 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double d_right = alpha * (static_cast<double>(i) * ds) + K - z[i];
    if (d_right <= 0.0) return 1.0;
    const double e = 2.0 * d_left * d_right / ds;
    if (e < kTouchCutoff) log_miss += std::log1p(-std::exp(-e));
    d_left = d_right;
  }
  return -std::expm1(log_miss);
}

void check_path_args(double t, std::size_t n) {
  if (!(t > 0.0)) throw DomainError("bridge: t must be > 0");
  if (n < 2) throw DomainError("bridge: n_steps must be >= 2");
}

}  // namespace

BridgeSampler::BridgeSampler(double t, std::size_t n) : t_(t), n_(n), a_(n), sd_(n) {
  check_path_args(t, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s0 = t * static_cast<double>(i) / static_cast<double>(n);
    const double s1 = t * static_cast<double>(i + 1) / static_cast<double>(n);
    if (i + 1 == n) {
      a_[i] = 0.0;
      sd_[i] = 0.0;
    } else {
      a_[i] = (t - s1) / (t - s0);
      sd_[i] = std::sqrt((s1 - s0) * (t - s1) / (t - s0));
    }
  }
}

void BridgeSampler::sample(Philox& rng, double* out) const {
  out[0] = 0.0;
  for (std::size_t i = 0; i + 1 < n_; ++i) out[i + 1] = a_[i] * out[i] + sd_[i] * rng.normal();
  out[n_] = 0.0;
}

BridgePath BridgeSampler::sample(Philox& rng) const {
  BridgePath p;
  p.t_total = t_;
  p.n_steps = n_;
  p.values.resize(n_ + 1);
  sample(rng, p.values.data());
  return p;
}

BridgePath sample_bridge(double t, std::size_t n, Philox& rng) {
  return BridgeSampler(t, n).sample(rng);
}

double occupation_above_line(const BridgePath& path, const LineBarrier& barrier) {
  return occupation_raw(path.values.data(), path.n_steps, path.t_total, barrier.alpha, barrier.K);
}

double occupation_below(const BridgePath& path, double b) {
  if (!(b > 0.0)) throw DomainError("occupation_below: b must be > 0");
  return occupation_below_raw(path.values.data(), path.n_steps, path.t_total, b);
}

double last_crossing_time(const BridgePath& path, const LineBarrier& barrier) {
  return last_crossing_raw(path.values.data(), path.n_steps, path.t_total, barrier.alpha, barrier.K);
}

double last_crossing_time_refined(const BridgePath& path, const LineBarrier& barrier, Philox& rng) {
  return last_crossing_refined_raw(path.values.data(), path.n_steps, path.t_total, barrier.alpha,
                                   barrier.K, rng);
}

double crossing_probability_given_grid(const BridgePath& path, const LineBarrier& barrier) {
  return crossing_given_grid_raw(path.values.data(), path.n_steps, path.t_total, barrier.alpha,
                                 barrier.K);
}

BridgePath reversed(const BridgePath& path) {
  BridgePath r = path;
  std::reverse(r.values.begin(), r.values.end());
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double g_tail_exact(double t, double alpha, double K, double q) {
  if (!(q > 0.0 && q < t)) throw DomainError("g_tail_exact: q must lie in (0, t)");
  if (alpha * t + K <= 0.0) return 1.0;
  const double root = std::sqrt(q * t * (t - q));
  const double first = std::exp(-2.0 * K * (alpha * t + K) / t) *
                       normal_cdf(-(alpha * t * q + K * (2.0 * q - t)) / root);
  const double second = normal_cdf(-(alpha * t * q + K * t) / root);  // 1 - Phi(x)
  return std::clamp(first + second, 0.0, 1.0);
}

double crossing_probability_exact(double t, double alpha, double K) {
  if (!(t > 0.0)) throw DomainError("crossing_probability_exact: t must be > 0");
  if (K <= 0.0) return 1.0;
  return std::exp(-2.0 * K * (alpha * t + K) / t);
}

double g_density(double t, double alpha, double K, double u) {
  if (!(u > 0.0 && u < t)) throw DomainError("g_density: u must lie in (0, t)");
  const double c = alpha * t + K;
  if (c <= 0.0) return 0.0;
  const double tu = t - u;
  const double m = alpha * u + K;
  return c * std::sqrt(t / (2.0 * kPi * u * tu * tu * tu)) * std::exp(-t * m * m / (2.0 * u * tu));
}

double phi_occupation_nonneg_branch(double g, double S, double K) {
  if (S <= 0.0) return 1.0;
  if (S >= g) return 0.0;
  const double gs = g - S;
  const double a = -2.0 * ((S / g) * (1.0 - K * K / g) - 1.0) * normal_cdf(-K * std::sqrt(S) / std::sqrt(g * gs));
  const double b = K * std::sqrt(2.0 * S * gs) / std::sqrt(kPi * g * g * g) * std::exp(-K * K * S / (2.0 * g * gs));
  return a - b;
}

double phi_occupation_nonpos_branch(double g, double S, double K) {
  if (S <= 0.0) return 1.0;
  if (S >= g) return 0.0;
  const double gs = g - S;
  const double a = 2.0 * ((gs / g) * (1.0 - K * K / g) - 1.0) * normal_cdf(K * std::sqrt(gs) / std::sqrt(g * S));
  const double b = K * std::sqrt(2.0 * S * gs) / std::sqrt(kPi * g * g * g) * std::exp(-K * K * gs / (2.0 * g * S));
  return 1.0 + a - b;
}

double phi_occupation(double g, double S, double K) {
  if (!(S >= 0.0 && S <= g)) throw DomainError("phi_occupation: S must lie in [0, g]");
  const double v = K >= 0.0 ? phi_occupation_nonneg_branch(g, S, K) : phi_occupation_nonpos_branch(g, S, K);
  return std::clamp(v, 0.0, 1.0);
}

double occupation_tail_exact(double t, double s, double alpha, double K) {
  if (!(t > 0.0)) throw DomainError("occupation_tail_exact: t must be > 0");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("occupation_tail_exact: s must lie in (0, 1)");
  const double S = s * t;
  auto f = [&](double u) {
    if (!(u > S && u < t)) return 0.0;
    return g_density(t, alpha, K, u) * phi_occupation(u, S, K);
  };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, S, t, 20, 1e-13, &err);
  return std::clamp(v, 0.0, 1.0);
}

double occupation_tail_rate(double s, double alpha) {
  return -alpha * alpha * s / (2.0 * (1.0 - s));
}

double occupation_tail_asymptotic(double t, double s, double alpha, double K) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("occupation_tail_asymptotic: s must lie in (0, 1)");
  if (!(alpha > 0.0)) throw DomainError("occupation_tail_asymptotic: alpha must be > 0");
  if (!(t > 0.0)) throw DomainError("occupation_tail_asymptotic: t must be > 0");
  const double one_s = 1.0 - s;
  const double base = std::pow(t, -1.5);
  const double expo = -t * alpha * alpha * s / (2.0 * one_s);
  if (K > 0.0) {
    return base * K * (std::sqrt(kPi) - 1.0) * std::sqrt(one_s / (2.0 * kPi * s * s * s)) *
           std::exp(expo - alpha * K * (1.0 + kSqrt2) / one_s) * (kSqrt2 * K * alpha / one_s + 1.0);
  }
  const double common = base * alpha * std::sqrt(1.0 / (2.0 * kPi * std::pow(s * one_s, 3))) *
                        std::exp(expo - alpha * K / one_s);
  const double r = 2.0 * one_s * one_s / (alpha * alpha);
  if (K == 0.0) return common * r * r * 2.0;
  return common * std::pow(r, 1.5) * kSqrt2 * std::abs(K) / std::sqrt(kPi);
}

double occupation_tail_lower_bound(double t, double s, double alpha, double K, double b, double L,
                                   double C) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("occupation_tail_lower_bound: s must lie in (0, 1)");
  if (!(K > 0.0 && b > 0.0 && L > 0.0)) throw DomainError("occupation_tail_lower_bound: K, b, L must be > 0");
  if (!(alpha > 0.0) || !(t > 0.0)) throw DomainError("occupation_tail_lower_bound: alpha, t must be > 0");
  const double one_s = 1.0 - s;
  return C * std::pow(t, -1.5) * std::exp(-K * K / (2.0 * L)) * std::sqrt(L) * K *
         std::sqrt(one_s / (2.0 * kPi * alpha * alpha)) *
         std::exp(-t * alpha * alpha * s / (2.0 * one_s) - (alpha * alpha * L + alpha * K) / one_s) *
         (1.0 - std::exp(-2.0 * b * alpha * s / one_s));
}

double laplace_rate(double lambda, double alpha) {
  const double r = std::sqrt(2.0 * lambda);
  return r > alpha ? 0.5 * (alpha - r) * (alpha - r) : 0.0;
}

LaplaceValue laplace_asymptotic(double t, double lambda, double alpha, double K) {
  if (!(lambda > 0.0) || !(alpha > 0.0)) throw DomainError("laplace_asymptotic: lambda, alpha must be > 0");
  LaplaceValue out;
  const double r = std::sqrt(2.0 * lambda);
  if (2.0 * lambda > alpha * alpha) {
    const double gap = r - alpha;
    double log_pref = 0.0;
    double log_exp = 0.5 * t * gap * gap;
    if (K > 0.0) {
      log_exp -= K * r * (1.0 + kSqrt2);
      log_pref = std::log(K * (std::sqrt(kPi) - 1.0) *
                          std::sqrt(alpha * lambda / (4.0 * kPi * gap * gap * gap)) *
                          (2.0 * K * std::sqrt(lambda) + 1.0));
    } else {
      log_exp -= K * r;
      log_pref = std::log(std::sqrt(2.0 * alpha) / std::sqrt(kPi * gap * gap * gap));
      if (K < 0.0) log_pref += std::log(r * std::abs(K));
    }
    out.asymptotic = true;
    out.log_value = log_exp + log_pref;
    out.value = std::exp(out.log_value);
    out.lower = 1.0;
    out.upper = std::numeric_limits<double>::infinity();
    return out;
  }
  if (!(K < 0.0)) {
    throw PreconditionError("laplace_asymptotic: for 2 lambda <= alpha^2 the bracket requires K < 0");
  }
  const double pre = 2.0 / std::sqrt(kPi * std::abs(K)) * lambda * std::exp(-2.0 * lambda * K / alpha);
  const double a2 = alpha * alpha;
  const bool equal = std::abs(a2 - 2.0 * lambda) <= 1e-12 * a2;
  out.asymptotic = false;
  out.lower = 1.0;
  out.upper = 1.0 + pre * (equal ? (t + 2.0 * K / alpha) : 2.0 / (a2 - 2.0 * lambda));
  out.value = std::numeric_limits<double>::quiet_NaN();
  out.log_value = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double log_laplace_exact(double t, double lambda, double alpha, double K) {
  if (!(t > 0.0) || !(lambda > 0.0)) throw DomainError("log_laplace_exact: t, lambda must be > 0");
  // E = 1 + int_0^t lambda e^{lambda r} P(T > r) dr. The integrand is
  // evaluated relative to e^{lambda t} to stay finite.
  auto f = [&](double r) {
    if (!(r > 0.0 && r < t)) return 0.0;
    return lambda * std::exp(lambda * (r - t)) * occupation_tail_exact(t, r / t, alpha, K);
  };
  double err = 0.0;
  const double scaled = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, t, 15, 1e-10, &err);
  return lambda * t + std::log(std::exp(-lambda * t) + scaled);
}

namespace {

template <class Fn>
RunningStats reduce_bridge_paths(const McParams& p, Fn&& fn) {
  const BridgeSampler sampler(p.t, p.n_steps);
  const std::size_t n_chunks = static_cast<std::size_t>((p.n_paths + kPathChunk - 1) / kPathChunk);
  auto chunks = parallel_map<RunningStats>(n_chunks, p.workers, [&](std::size_t c) {
    RunningStats st;
    std::vector<double> z(p.n_steps + 1);
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kPathChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(p.n_paths, lo + kPathChunk);
    for (std::uint64_t path = lo; path < hi; ++path) {
      Philox rng(p.seed, path);
      sampler.sample(rng, z.data());
      st.add(fn(z.data(), path));
    }
    return st;
  });
  RunningStats total;
  for (const auto& c : chunks) total.merge(c);
  return total;
}

}  // namespace

McEstimate mc_functional(Functional which, const McParams& p) {
  if (p.n_paths < 100) throw DomainError("mc_functional: n_paths must be >= 100");
  check_path_args(p.t, p.n_steps);
  const bool laplace = which == Functional::kLaplace || which == Functional::kRestrictedLaplace;
  if (laplace && p.lambda * p.t > 700.0) {
    std::ostringstream os;
    os << "mc_functional: lambda t = " << p.lambda * p.t
       << " exceeds 700, exp(lambda T) may overflow; rescale and use log-domain estimates";
    throw NumericalBlowup(os.str(), -1);
  }
  const std::size_t n = p.n_steps;
  const double t = p.t;
  RunningStats st = reduce_bridge_paths(p, [&](const double* z, std::uint64_t) -> double {
    switch (which) {
      case Functional::kTailProbability:
        return occupation_raw(z, n, t, p.alpha, p.K) > p.s * t ? 1.0 : 0.0;
      case Functional::kRestrictedTail:
        return (occupation_raw(z, n, t, p.alpha, p.K) > p.s * t &&
                occupation_below_raw(z, n, t, p.b) <= p.L) ? 1.0 : 0.0;
      case Functional::kLaplace:
        return std::exp(p.lambda * occupation_raw(z, n, t, p.alpha, p.K));
      case Functional::kRestrictedLaplace:
        return occupation_below_raw(z, n, t, p.b) <= p.L
                   ? std::exp(p.lambda * occupation_raw(z, n, t, p.alpha, p.K)) : 0.0;
      case Functional::kCrossingGrid:
        return last_crossing_raw(z, n, t, p.alpha, p.K) > 0.0 || (z[0] >= p.K) ? 1.0 : 0.0;
      case Functional::kCrossingBridge:
        return crossing_given_grid_raw(z, n, t, p.alpha, p.K);
    }
    return 0.0;
  });
  return McEstimate{st.mean, st.std_error(), st.n, p.seed};
}

std::vector<double> mc_samples(Sampled which, const McParams& p) {
  if (p.n_paths < 1) throw DomainError("mc_samples: n_paths must be >= 1");
  check_path_args(p.t, p.n_steps);
  const BridgeSampler sampler(p.t, p.n_steps);
  const std::size_t n = p.n_steps;
  const double t = p.t;
  const std::size_t n_chunks = static_cast<std::size_t>((p.n_paths + kPathChunk - 1) / kPathChunk);
  auto chunks = parallel_map<std::vector<double>>(n_chunks, p.workers, [&](std::size_t c) {
    std::vector<double> out;
    std::vector<double> z(n + 1);
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kPathChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(p.n_paths, lo + kPathChunk);
    out.reserve(hi - lo);
    for (std::uint64_t path = lo; path < hi; ++path) {
      const bool alt = which == Sampled::kOccupationFractionReversed;
      Philox rng(p.seed, alt ? (path | kAltStream) : path);
      sampler.sample(rng, z.data());
      switch (which) {
        case Sampled::kOccupationFraction:
          out.push_back(occupation_raw(z.data(), n, t, p.alpha, p.K) / t);
          break;
        case Sampled::kOccupationFractionReversed: {
          std::reverse(z.begin(), z.end());
          // Occupation of the reversed path above alpha (t - s) + K,
          // left-endpoint sum in reversed time.
          const double ds = t / static_cast<double>(n);
          std::size_t count = 0;
          for (std::size_t i = 0; i < n; ++i) {
            count += static_cast<std::size_t>(z[i] >= p.alpha * (t - static_cast<double>(i) * ds) + p.K);
          }
          out.push_back(static_cast<double>(count) * ds / t);
          break;
        }
        case Sampled::kLastCrossingGrid:
          out.push_back(last_crossing_raw(z.data(), n, t, p.alpha, p.K));
          break;
        case Sampled::kLastCrossingRefined: {
          Philox aux(p.seed, path | kAuxStream);
          out.push_back(last_crossing_refined_raw(z.data(), n, t, p.alpha, p.K, aux));
          break;
        }
      }
    }
    return out;
  });
  std::vector<double> all;
  all.reserve(p.n_paths);
  for (auto& c : chunks) all.insert(all.end(), c.begin(), c.end());
  return all;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) x = a[i];
    else x = b[j];
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace invasion
