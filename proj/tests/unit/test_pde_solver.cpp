#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "invasion/errors.hpp"
#include "invasion/feynman_kac.hpp"
#include "invasion/pde_solver.hpp"
#include "invasion/speed_theory.hpp"

using namespace invasion;

namespace {

const WaveProfile& wave() {
  static const WaveProfile w = compute_profile(1e-6, 50.0);
  return w;
}

FieldState constant_state(std::size_t n, double v, double w) {
  FieldState st;
  st.v.assign(n, v);
  st.w.assign(n, w);
  return st;
}

}  // namespace

TEST(Step, CoexistenceFixpointUnchanged) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make(-5.0, 0.1, 100, 0.25);
  const FieldState st = constant_state(100, 1.0, s.stable_w());
  const BoundaryValues fix{1.0, s.stable_w(), 1.0, s.stable_w()};
  const FieldState next = step(st, s, g, fix);
  for (std::size_t i = 0; i < next.size(); ++i) {
    EXPECT_NEAR(next.v[i], 1.0, 1e-15);
    EXPECT_NEAR(next.w[i], s.stable_w(), 1e-15);
  }
  EXPECT_NEAR(next.time, g.dt, 1e-18);
  EXPECT_EQ(next.step_index, 1);
}

TEST(Step, ZeroStateUnchanged) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make(0.0, 0.1, 50, 0.25);
  const BoundaryValues zero{0.0, 0.0, 0.0, 0.0};
  const FieldState next = step(constant_state(50, 0.0, 0.0), s, g, zero);
  for (std::size_t i = 0; i < next.size(); ++i) {
    EXPECT_EQ(next.v[i], 0.0);
    EXPECT_EQ(next.w[i], 0.0);
  }
}

TEST(Step, FiveCellHandComputation) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const double m = s.stable_w();
  const Grid g = Grid::make(-2.0, 1.0, 5, 0.25);
  const BoundaryValues bc{1.0, m, 1.0, 0.0};
  FieldState st = constant_state(5, 1.0, 0.0);
  // Heaviside with the midpoint value at the jump.
  st.w = {m, m, 0.5 * m, 0.0, 0.0};
  const FieldState next = step(st, s, g, bc);
  const double dt = 0.25, r = 0.5 * dt;
  // Ghost values: left m, right 0. With v = 1 the rate is gamma~ - beta~ - gamma~ w.
  const std::array<double, 7> ext{m, m, m, 0.5 * m, 0.0, 0.0, 0.0};
  double mass_before = 0.0, mass_after = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double w = ext[i + 1];
    const double lap = ext[i] - 2 * w + ext[i + 2];
    const double expect = w + r * lap + dt * (s.gamma_t - s.beta_t - s.gamma_t * w) * w;
    EXPECT_NEAR(next.w[i], std::clamp(expect, 0.0, m), 1e-15) << i;
    EXPECT_EQ(next.v[i], 1.0);
    mass_before += w;
    mass_after += next.w[i];
  }
  EXPECT_GT(mass_after, mass_before);
}

TEST(Step, NanRaisesBlowupWithStepIndex) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make(-5.0, 0.1, 100, 0.25);
  FieldState st = constant_state(100, 1.0, s.stable_w());
  st.step_index = 41;
  st.w[50] = std::numeric_limits<double>::quiet_NaN();
  try {
    step(st, s, g);
    FAIL();
  } catch (const NumericalBlowup& e) {
    EXPECT_EQ(e.step_index(), 42);
  }
}

TEST(Step, ClampsAndCounts) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make(-5.0, 0.1, 10, 0.25);
  FieldState st = constant_state(10, 1.0, s.stable_w());
  st.w[4] = 2.0;
  const FieldState next = step(st, s, g);
  for (double w : next.w) EXPECT_LE(w, s.stable_w());
  EXPECT_GT(next.clamp_events, 0u);
}

TEST(FrontPosition, Examples) {
  const std::vector<double> f{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(front_position(f, 0.5, 0.0, 1.0), 1.5);
  const std::vector<double> shifted{1, 1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(front_position(shifted, 0.5, 0.0, 1.0) - front_position(f, 0.5, 0.0, 1.0), 1.0);
  EXPECT_THROW(front_position(std::vector<double>(5, 0.0), 0.5, 0.0, 1.0), FrontLost);
  // Rightmost crossing wins.
  const std::vector<double> two{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(front_position(two, 0.5, 10.0, 1.0), 12.5);
}

TEST(ShiftWindow, NoShiftWhenFarFromEdge) {
  const Grid g = Grid::make(0.0, 1.0, 100, 0.25);
  FieldState st = constant_state(100, 0.0, 0.0);
  for (int i = 0; i < 20; ++i) st.v[i] = 1.0;
  st.window_offset = 0.0;
  const FieldState before = st;
  EXPECT_EQ(shift_window(st, g, 30.0, 10, BoundaryValues{}), 0u);
  EXPECT_EQ(st.v, before.v);
  EXPECT_EQ(st.window_offset, 0.0);
}

TEST(ShiftWindow, ShiftPreservesOverlap) {
  const Grid g = Grid::make(0.0, 0.5, 100, 0.25);
  FieldState st = constant_state(100, 0.0, 0.0);
  for (int i = 0; i < 100; ++i) {
    st.v[i] = i < 80 ? 1.0 - i * 1e-3 : 0.0;
    st.w[i] = i < 70 ? 0.3 + i * 1e-4 : 0.0;
  }
  st.window_offset = 0.0;
  const FieldState before = st;
  const std::size_t k = shift_window(st, g, 20.0, 10, BoundaryValues{});
  ASSERT_GT(k, 0u);
  EXPECT_EQ(k % 10, 0u);
  EXPECT_DOUBLE_EQ(st.window_offset, static_cast<double>(k) * 0.5);
  EXPECT_EQ(st.shifted_cells, static_cast<std::int64_t>(k));
  for (std::size_t i = 0; i + k < 100; ++i) {
    EXPECT_EQ(st.v[i], before.v[i + k]);
    EXPECT_EQ(st.w[i], before.w[i + k]);
  }
  for (std::size_t i = 100 - k; i < 100; ++i) {
    EXPECT_EQ(st.v[i], 0.0);
    EXPECT_EQ(st.w[i], 0.0);
  }
  EXPECT_GE(g.x_left + st.window_offset + 99 * 0.5 - front_position(st.v, 0.5, st.window_offset, 0.5), 20.0);
}

TEST(Run, ZeroHorizonRecordsInitialFronts) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const FrontTrack tr = run(s, Grid::make_default(), 0.0, 0.5, 0.0, wave());
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_EQ(tr.times[0], 0.0);
  EXPECT_NEAR(tr.x_front_w[0], 0.0, 1e-12);
  EXPECT_NEAR(tr.x_front_v[0], 0.0, 1e-3);
}

TEST(Run, DeterministicAndOrdered) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make_window(200.0, 0.05, 0.25, 60.0);
  const FrontTrack a = run(s, g, 30.0, 0.5, 0.0, wave());
  const FrontTrack b = run(s, g, 30.0, 0.5, 0.0, wave());
  ASSERT_EQ(a.size(), 61u);
  EXPECT_EQ(a.x_front_v, b.x_front_v);
  EXPECT_EQ(a.x_front_w, b.x_front_w);
  EXPECT_EQ(a.clamp_events, b.clamp_events);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LE(a.x_front_w[i], a.x_front_v[i] + 1e-3) << "t=" << a.times[i];
    if (i > 0) {
      EXPECT_GT(a.times[i], a.times[i - 1]);
    }
  }
}

TEST(Run, WindowFollowsTheFrontAndFieldsStayBounded) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make_window(100.0, 0.05, 0.25, 30.0);
  RunOptions o;
  o.t_end = 40.0;
  o.margin = 30.0;
  const RunResult r = simulate(s, g, wave(), o);
  EXPECT_GT(r.final_state.shifted_cells, 0);
  const double right_edge = r.final_state.window_offset + (g.n_cells - 1) * g.dx;
  EXPECT_GT(right_edge - r.track.x_front_v.back(), 30.0 - 1.0);
  for (std::size_t i = 0; i < r.final_state.size(); ++i) {
    ASSERT_GE(r.final_state.v[i], 0.0);
    ASSERT_LE(r.final_state.v[i], 1.0);
    ASSERT_GE(r.final_state.w[i], 0.0);
    ASSERT_LE(r.final_state.w[i], s.stable_w());
  }
}

TEST(Run, CrudeBoundsHoldPointwise) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make_window(200.0, 0.05, 0.25, 80.0);
  RunOptions o;
  o.t_end = 5.0;
  o.margin = 0.0;
  o.snapshot_times = {1.0, 5.0};
  const RunResult r = simulate(s, g, wave(), o);
  for (const auto& sn : r.snapshots) {
    for (std::size_t i = 0; i < sn.x.size(); i += 5) {
      const CrudeBounds b = crude_bounds(sn.time, sn.x[i], s);
      ASSERT_GE(sn.w[i], 0.95 * b.lower - 1e-12) << sn.time << " " << sn.x[i];
      ASSERT_LE(sn.w[i], 1.05 * std::min(b.upper, s.stable_w()) + 1e-12) << sn.time << " " << sn.x[i];
    }
  }
}

TEST(Run, ProbeHistoriesAreRecorded) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make_window(200.0, 0.05, 0.25, 60.0);
  RunOptions o;
  o.t_end = 10.0;
  o.probe_points = {-5.0, 5.0};
  const RunResult r = simulate(s, g, wave(), o);
  ASSERT_EQ(r.probe_w.size(), 2u);
  ASSERT_EQ(r.probe_w[0].size(), r.track.size());
  EXPECT_NEAR(r.probe_w[0].front(), s.stable_w(), 1e-12);
  EXPECT_EQ(r.probe_w[1].front(), 0.0);
  EXPECT_GT(r.probe_w[1].back(), 0.1);
}

TEST(FlatBackground, ShortRunSpeedIsClose) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const FrontTrack tr = run_flat_background(s, Grid::make_window(200.0, 0.05, 0.25, 60.0), 60.0, 0.5);
  EXPECT_TRUE(std::isnan(tr.x_front_v.front()));
  const SpeedFit fit = fit_speed(tr, FrontField::kW, 0.5);
  EXPECT_NEAR(fit.u_hat / flat_speed(s), 1.0, 0.05);
}

TEST(FlatBackground, DegenerateLimitIsSlow) {
  const ScaledParams s = make_scaled(0.75, 0.7499);
  const FrontTrack tr = run_flat_background(s, Grid::make_window(100.0, 0.05, 0.25, 50.0), 20.0, 0.5);
  EXPECT_LT(std::abs(tr.x_front_w.back()), 1.0);
}
