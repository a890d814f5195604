#include <gtest/gtest.h>

#include <cmath>

#include "invasion/errors.hpp"
#include "invasion/experiments.hpp"
#include "invasion/feynman_kac.hpp"

using namespace invasion;

namespace {

const WaveProfile& wave() {
  static const WaveProfile w = compute_profile(1e-6, 50.0);
  return w;
}

WTrajectory two_frames() {
  WTrajectory tr;
  tr.dx = 1.0;
  tr.times = {0.0, 1.0};
  tr.x_left = {0.0, 1.0};
  tr.w = {{0.8, 0.4, 0.0}, {0.8, 0.8, 0.2}};
  return tr;
}

}  // namespace

TEST(WLookup, BilinearWithExtensions) {
  const ScaledParams s = make_scaled(0.75, 0.15);  // stable value 0.8
  const WLookup wl(two_frames(), s);
  EXPECT_DOUBLE_EQ(wl(0.0, 0.5), 0.6);
  EXPECT_DOUBLE_EQ(wl(1.0, 2.5), 0.5);
  EXPECT_DOUBLE_EQ(wl(0.0, -3.0), 0.8);
  EXPECT_DOUBLE_EQ(wl(0.0, 9.0), 0.0);
  // tau = 0.5, x = 1: frame 0 gives 0.4, frame 1 gives 0.8 (left edge).
  EXPECT_DOUBLE_EQ(wl(0.5, 1.0), 0.6);
  EXPECT_DOUBLE_EQ(wl.t_max(), 1.0);
  for (double tau : {0.0, 0.3, 1.0}) {
    for (double x = -2; x < 6; x += 0.25) {
      EXPECT_GE(wl(tau, x), 0.0);
      EXPECT_LE(wl(tau, x), 0.8);
    }
  }
}

TEST(WLookup, RejectsBadTrajectories) {
  const ScaledParams s = make_scaled(0.75, 0.15);
  EXPECT_THROW(WLookup(WTrajectory{}, s), ConfigError);
  WTrajectory tr = two_frames();
  tr.times = {1.0, 1.0};
  EXPECT_THROW(WLookup(tr, s), ConfigError);
}

TEST(CrudeBounds, Examples) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const CrudeBounds b0 = crude_bounds(1.0, 0.0, s);
  EXPECT_NEAR(b0.lower, s.stable_w() / 2, 1e-15);
  EXPECT_NEAR(b0.upper, 0.4333333333333333 * std::exp(0.9), 1e-12);
  EXPECT_NEAR(b0.upper, 1.06583, 1e-5);
  EXPECT_TRUE(std::isnan(b0.tail_lower));
  const CrudeBounds far = crude_bounds(1.0, 6.0, s);
  EXPECT_LE(far.tail_lower, far.lower);
  EXPECT_GE(far.tail_upper, far.upper);
  EXPECT_THROW(crude_bounds(0.0, 0.0, s), DomainError);
}

TEST(FeynmanKac, RequiresCoverage) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const WLookup wl(two_frames(), make_scaled(0.75, 0.1));
  FkOptions o;
  o.n_paths = 100;
  o.n_steps = 10;
  EXPECT_THROW(fk_estimate(2.0, 0.0, s, wave(), wl, o), PreconditionError);
  EXPECT_THROW(fk_upper_estimate(0.0, 0.0, s, wave(), o), DomainError);
}

TEST(FeynmanKac, OverflowGuard) {
  const ScaledParams s = make_scaled(0.75, 0.0);
  FkOptions o;
  o.n_paths = 200;
  o.n_steps = 50;
  o.a = 1e4;  // omega ~ 0 everywhere: exponent (1 - beta~) t
  EXPECT_THROW(fk_upper_estimate(800.0, 0.0, s, wave(), o), NumericalBlowup);
}

TEST(FeynmanKac, SandwichAndPdeAgreementAtSmallTime) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  FkCheckOptions o;
  o.t = 3.0;
  o.xs = {-6.0, -2.0, 0.0, 1.0, 2.0, 3.0};
  o.fk.n_paths = 20000;
  o.fk.n_steps = 400;
  o.fk.seed = 17;
  const auto rows = fk_check(s, Grid::make_window(150.0, 0.05, 0.25, 60.0), wave(), o);
  for (const auto& r : rows) {
    const auto& f = r.fk;
    const double se_fl = std::hypot(f.full.std_error, f.lower.std_error);
    const double se_fu = std::hypot(f.full.std_error, f.upper.std_error);
    EXPECT_LE(f.lower.mean, f.full.mean + 3 * se_fl) << f.x;
    EXPECT_LE(f.full.mean, f.upper.mean + 3 * se_fu) << f.x;
    EXPECT_NEAR(f.full.mean, r.pde_w, 3 * f.full.std_error + 0.05 * r.pde_w) << f.x;
    EXPECT_LE(f.upper.mean, r.crude.upper + 3 * f.upper.std_error) << f.x;
  }
}

// Known failure behind the front: the lower-bound rate 1 - beta~ - omega is negative
// where omega = 1, while the crude lower bound uses rate 0.
TEST(FeynmanKac, LowerEstimateAboveCrudeLower) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  FkOptions o;
  o.n_paths = 20000;
  o.n_steps = 400;
  o.seed = 17;
  for (double x : {-6.0, -2.0, 0.0, 1.0, 2.0, 3.0}) {
    const McEstimate lo = fk_lower_estimate(3.0, x, s, wave(), o);
    EXPECT_GE(lo.mean, crude_bounds(3.0, x, s).lower - 3 * lo.std_error) << x;
  }
}

TEST(FeynmanKac, DeterministicAcrossWorkers) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  FkOptions o;
  o.n_paths = 9000;
  o.n_steps = 100;
  o.workers = 1;
  const McEstimate a = fk_upper_estimate(2.0, 0.5, s, wave(), o);
  o.workers = 3;
  const McEstimate b = fk_upper_estimate(2.0, 0.5, s, wave(), o);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(FeynmanKac, StdErrorScalesWithPaths) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  FkOptions o;
  o.n_steps = 100;
  o.n_paths = 10000;
  const double e1 = fk_lower_estimate(2.0, 1.0, s, wave(), o).std_error;
  o.n_paths = 40000;
  const double e4 = fk_lower_estimate(2.0, 1.0, s, wave(), o).std_error;
  EXPECT_NEAR(e1 / e4, 2.0, 0.4);
}
