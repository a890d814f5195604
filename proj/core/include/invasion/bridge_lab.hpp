#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "invasion/rng.hpp"

namespace invasion {

/// Discretised Brownian bridge from 0 to 0 on [0, t_total]; values[i] is the
/// position at time i * t_total / n_steps.
struct BridgePath {
  double t_total = 0.0;
  std::size_t n_steps = 0;
  std::vector<double> values;

  double dt() const noexcept { return t_total / static_cast<double>(n_steps); }
  double time_at(std::size_t i) const noexcept { return static_cast<double>(i) * dt(); }
};

/// The line s -> alpha s + K.
struct LineBarrier {
  double alpha = 0.0;
  double K = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Precomputed sequential conditional-Gaussian construction for a fixed
/// (t, n): value_{i+1} = a_i value_i + sd_i Z_i.
class BridgeSampler {
 public:
  BridgeSampler(double t, std::size_t n);

  void sample(Philox& rng, double* out) const;
  BridgePath sample(Philox& rng) const;

  double t() const noexcept { return t_; }
  std::size_t n() const noexcept { return n_; }

 private:
  double t_;
  std::size_t n_;
  std::vector<double> a_, sd_;
};

/// Throws DomainError unless t > 0 and n >= 2.
BridgePath sample_bridge(double t, std::size_t n, Philox& rng);

/// Left-endpoint Riemann sum of the time with values[i] >= alpha s_i + K.
double occupation_above_line(const BridgePath& path, const LineBarrier& barrier);
/// Left-endpoint Riemann sum of the time with values[i] <= -b. Requires b > 0.
double occupation_below(const BridgePath& path, double b);
/// Largest grid time with values[i] >= alpha s_i + K, or 0 when there is none.
double last_crossing_time(const BridgePath& path, const LineBarrier& barrier);

/// Last crossing time with sub-grid correction. Between grid points the path
/// is a Brownian bridge, so an interval whose endpoints are both below the
/// line (distances d_i, d_{i+1}) touches it with probability
/// exp(-2 d_i d_{i+1} / ds). Scanning backwards from t, the first interval
/// that touches the line (an endpoint on or above it, or a crossing drawn
/// with `rng`) gives g, reported at the interval midpoint. Returns 0 when no
/// crossing occurs.
double last_crossing_time_refined(const BridgePath& path, const LineBarrier& barrier, Philox& rng);

/// Conditional probability, given the grid values, that the continuous
/// bridge touches the line somewhere on [0, t].
double crossing_probability_given_grid(const BridgePath& path, const LineBarrier& barrier);

/// Reverses a path in time (s -> t - s).
BridgePath reversed(const BridgePath& path);

// Exact laws. Phi is the standard normal CDF.

double normal_cdf(double x);

/// P(g_t >= q). Throws DomainError unless 0 < q < t. Returns 1 when
/// alpha t + K <= 0.
double g_tail_exact(double t, double alpha, double K, double q);
/// P(g_t >= 0+): exp(-2K(alpha t + K)/t) for K > 0, else 1.
double crossing_probability_exact(double t, double alpha, double K);
/// Density of g_t on (0, t). Throws DomainError outside (0, t).
double g_density(double t, double alpha, double K, double u);
/// Conditional occupation law given g_t = g: P(occupation >= S). Throws
/// DomainError unless 0 <= S <= g.
double phi_occupation(double g, double S, double K);
/// The two branches separately, for cross-checks at K = 0.
double phi_occupation_nonneg_branch(double g, double S, double K);
double phi_occupation_nonpos_branch(double g, double S, double K);

/// P(T_t^K > s t) by adaptive quadrature of g_density * phi_occupation
/// over (s t, t).
double occupation_tail_exact(double t, double s, double alpha, double K);

/// Leading-order tail of P(T_t^K > s t) for large t, all three signs of K.
/// Uses |K| in the K < 0 prefactor. Throws DomainError unless 0 < s < 1
/// and alpha > 0.
double occupation_tail_asymptotic(double t, double s, double alpha, double K);
/// Exponential rate -alpha^2 s / (2 (1 - s)) of the tail.
double occupation_tail_rate(double s, double alpha);

/// Lower bound on P(T > s t, U^b <= L) for K, b, L > 0 with constant C.
double occupation_tail_lower_bound(double t, double s, double alpha, double K, double b,
                                   double L, double C = 1.0);

struct LaplaceValue {
  bool asymptotic = true;  // true: `value` is the large-t leading order
  double value = 0.0;      // leading order of E[exp(lambda T)] (asymptotic case)
  double log_value = 0.0;  // log of `value`, finite even when `value` overflows
  double lower = 1.0;      // bracket for 2 lambda <= alpha^2
  double upper = 0.0;
};

/// Leading order of E[exp(lambda T_t^K)] when 2 lambda > alpha^2; the
/// bracket [1, upper] when 2 lambda <= alpha^2 (requires K < 0, else
/// PreconditionError).
LaplaceValue laplace_asymptotic(double t, double lambda, double alpha, double K);
/// (alpha - sqrt(2 lambda))^2 / 2 for 2 lambda > alpha^2, else 0.
double laplace_rate(double lambda, double alpha);

/// log E[exp(lambda T_t^K)] via E = 1 + int_0^t lambda e^{lambda r}
/// P(T > r) dr with the exact composition law.
double log_laplace_exact(double t, double lambda, double alpha, double K);

// Monte Carlo engine.

enum class Functional {
  kTailProbability,        // 1{T > s t}
  kRestrictedTail,         // 1{T > s t, U^b <= L}
  kLaplace,                // exp(lambda T)
  kRestrictedLaplace,      // exp(lambda T) 1{U^b <= L}
  kCrossingGrid,           // 1{path above the line at some grid point}
  kCrossingBridge,         // conditional crossing probability given the grid
};

struct McParams {
  double t = 1.0;
  double alpha = 0.0;
  double K = 0.0;
  double s = 0.5;
  double lambda = 0.0;
  double b = 1.0;
  double L = 1.0;
  std::uint64_t n_paths = 100000;
  std::size_t n_steps = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// Deterministic given (seed, n_paths, n_steps) for any worker count.
/// Laplace functionals throw NumericalBlowup when lambda t > 700.
McEstimate mc_functional(Functional which, const McParams& p);

enum class Sampled {
  kOccupationFraction,          // T / t, barrier alpha s + K
  kOccupationFractionReversed,  // reversed path against alpha (t - s) + K, independent streams
  kLastCrossingGrid,            // g on the grid
  kLastCrossingRefined,         // g with sub-grid correction
};

/// Per-path samples in path order (for empirical distribution checks).
std::vector<double> mc_samples(Sampled which, const McParams& p);

/// Sup distance between the empirical CDF of `samples` and `cdf`; atoms of
/// `cdf` are handled through its left limits.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace invasion

#include <algorithm>
#include <cmath>

template <class Cdf>
double invasion::ks_distance(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double F = cdf(samples[i]);
    const double F_left = cdf(std::nextafter(samples[i], -HUGE_VAL));
    d = std::max(d, std::max(std::abs(F_left - static_cast<double>(i) / n),
                             std::abs(static_cast<double>(j) / n - F)));
    i = j;
  }
  return d;
}
