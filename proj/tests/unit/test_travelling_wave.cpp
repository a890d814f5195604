#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "invasion/errors.hpp"
#include "invasion/pde_solver.hpp"
#include "invasion/speed_theory.hpp"
#include "invasion/travelling_wave.hpp"

using namespace invasion;

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;

const WaveProfile& standard_wave() {
  static const WaveProfile w = compute_profile(1e-6, 50.0);
  return w;
}
}  // namespace

TEST(WaveProfile, CentredMonotoneBounded) {
  const WaveProfile& w = standard_wave();
  EXPECT_NEAR(evaluate(w, 0.0), 0.5, 1e-6);
  EXPECT_LE(w.centring_error, 1e-6);
  EXPECT_EQ(w.monotonicity_violations, 0u);
  for (std::size_t i = 0; i < w.omega.size(); ++i) {
    ASSERT_GE(w.omega[i], 0.0);
    ASSERT_LE(w.omega[i], 1.0);
    if (i > 0) {
      ASSERT_LE(w.omega[i], w.omega[i - 1]);
    }
  }
  EXPECT_LT(w.last_update, 1e-6);
}

TEST(WaveProfile, SolvesTheWaveOde) {
  // 1/2 w'' + sqrt(2) w' + w (1 - w) = 0 on the interior, by finite differences.
  const WaveProfile& w = standard_wave();
  const double h = w.dx();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < w.omega.size(); ++i) {
    const double d2 = (w.omega[i + 1] - 2 * w.omega[i] + w.omega[i - 1]) / (h * h);
    const double d1 = (w.omega[i + 1] - w.omega[i - 1]) / (2 * h);
    worst = std::max(worst, std::abs(0.5 * d2 + kSqrt2 * d1 + w.omega[i] * (1 - w.omega[i])));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(WaveProfile, EvaluateLimits) {
  const WaveProfile& w = standard_wave();
  EXPECT_EQ(evaluate(w, -1e6), 1.0);
  EXPECT_EQ(evaluate(w, 1e6), 0.0);
  EXPECT_TRUE(std::isnan(evaluate(w, std::nan(""))));
  // Tail formulas continue the table.
  const double xr = w.half_width();
  EXPECT_NEAR(evaluate(w, xr + 1e-9) / evaluate(w, xr - 1e-9), 1.0, 0.05);
  EXPECT_NEAR((1 - evaluate(w, -xr - 1e-9)) / (1 - evaluate(w, -xr + 1e-9)), 1.0, 0.05);
}

TEST(WaveProfile, TailExponents) {
  const TailFit f = check_tails(standard_wave());
  EXPECT_NEAR(f.right_slope / -kSqrt2, 1.0, 0.02);
  EXPECT_NEAR(f.left_slope / (2 - kSqrt2), 1.0, 0.02);
  EXPECT_GT(f.tail_C, 0.0);
  EXPECT_GT(f.tail_c, 0.0);
}

TEST(WaveProfile, TailResidualsDoNotGrowWithWidth) {
  const TailFit narrow = check_tails(compute_profile(1e-6, 30.0));
  const TailFit wide = check_tails(compute_profile(1e-6, 60.0));
  EXPECT_LE(wide.right_residual, narrow.right_residual * (1 + 1e-9));
  EXPECT_LE(wide.left_residual, narrow.left_residual * (1 + 1e-9));
}

TEST(WaveProfile, Idempotent) {
  const WaveProfile a = compute_profile(1e-6, 50.0);
  const WaveProfile b = compute_profile(1e-6, 50.0);
  ASSERT_EQ(a.omega.size(), b.omega.size());
  double diff = 0.0;
  for (std::size_t i = 0; i < a.omega.size(); ++i) diff = std::max(diff, std::abs(a.omega[i] - b.omega[i]));
  EXPECT_LT(diff, 2e-6);
}

TEST(WaveProfile, OptionErrors) {
  EXPECT_THROW(compute_profile(0.0, 50.0), DomainError);
  EXPECT_THROW(compute_profile(1e-6, 20.0), DomainError);
  WaveOptions o;
  o.tol = 1e-16;
  o.max_iterations = 1;
  EXPECT_THROW(compute_profile(o), ConvergenceError);
}

TEST(WaveProfile, TailWindowErrors) {
  WaveProfile w = standard_wave();
  TailWindows win;
  win.right_lo = 60.0;
  win.right_hi = 70.0;
  EXPECT_THROW(check_tails(w, win), DomainError);
}

TEST(BramsonCentring, Values) {
  EXPECT_DOUBLE_EQ(m_of_t(1.0), kSqrt2);
  EXPECT_NEAR(m_of_t(std::exp(1.0)), kSqrt2 * std::exp(1.0) - 3 / (2 * kSqrt2), 1e-12);
  EXPECT_NEAR(m_of_t(std::exp(1.0)), 2.78357, 1e-5);
  EXPECT_NEAR(m_of_t(1e8) / 1e8, kSqrt2, 1e-6);
  EXPECT_THROW(m_of_t(0.5), DomainError);
}

TEST(WaveProfile, TranslatesAtSpeedSqrt2UnderTheScalarEquation) {
  // v(0, x) = omega(x) with w = 0 is an exact travelling solution.
  const Grid g = Grid::make_window(200.0, 0.05, 0.25, 60.0);
  RunOptions o;
  o.t_end = 20.0;
  o.with_mutant = false;
  const WaveProfile& w = standard_wave();
  const RunResult r = simulate(make_scaled(0.75, 0.1), g, w, o);
  // A front offset d moves the profile by at most d max|omega'| in sup-norm.
  double slope = 0.0;
  for (std::size_t i = 1; i < w.omega.size(); ++i) {
    slope = std::max(slope, (w.omega[i - 1] - w.omega[i]) / w.dx());
  }
  for (std::size_t i = 0; i < r.track.size(); ++i) {
    const double d = std::abs(r.track.x_front_v[i] - kSqrt2 * r.track.times[i]);
    ASSERT_LE(d * slope, 1e-2) << "t=" << r.track.times[i];
  }
}
