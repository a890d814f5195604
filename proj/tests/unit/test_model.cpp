#include <gtest/gtest.h>

#include <cmath>

#include "invasion/errors.hpp"
#include "invasion/model.hpp"
#include "invasion/travelling_wave.hpp"

using namespace invasion;

TEST(Rescale, IdentityCase) {
  const ScaledParams s = rescale({1.0, 0.1, 0.75, 1.0});
  EXPECT_DOUBLE_EQ(s.gamma_t, 0.75);
  EXPECT_DOUBLE_EQ(s.beta_t, 0.1);
}

TEST(Rescale, GeneralArithmetic) {
  const ScaledParams s = rescale({2.0, 1.2, 0.5, 3.0});
  EXPECT_NEAR(s.gamma_t, 0.25, 1e-15);
  EXPECT_NEAR(s.beta_t, 0.2, 1e-15);
}

TEST(Rescale, RejectsOrderViolation) {
  try {
    rescale({1.0, 0.9, 0.5, 1.0});
    FAIL() << "expected ConstraintViolation";
  } catch (const ConstraintViolation& e) {
    EXPECT_NE(std::string(e.what()).find("gamma > beta/K"), std::string::npos) << e.what();
  }
}

TEST(Rescale, RejectsEachInequality) {
  EXPECT_THROW(rescale({0.0, 0.1, 0.5, 1.0}), ConstraintViolation);
  EXPECT_THROW(rescale({1.0, 0.1, 0.5, 0.0}), ConstraintViolation);
  EXPECT_THROW(rescale({1.0, -0.1, 0.5, 1.0}), ConstraintViolation);
  EXPECT_THROW(rescale({1.0, 0.1, 1.5, 1.0}), ConstraintViolation);
}

TEST(Rescale, ScaleInvariance) {
  for (double c : {0.5, 2.0, 7.0}) {
    const double a = 1.7, b = 0.3, g = 0.9, K = 2.5;
    const ScaledParams lhs = rescale({c * a, c * b, c * g, K});
    const ScaledParams rhs = rescale({1.0, (c * b) / (c * a), (c * g) / (c * a), K});
    EXPECT_NEAR(lhs.gamma_t, rhs.gamma_t, 1e-15);
    EXPECT_NEAR(lhs.beta_t, rhs.beta_t, 1e-15);
  }
}

TEST(Validate, ZeroBetaAllowedAndBoundsChecked) {
  EXPECT_NO_THROW(make_scaled(0.5, 0.0));
  EXPECT_THROW(make_scaled(1.0, 0.1), ConstraintViolation);
  EXPECT_THROW(make_scaled(0.5, 0.5), ConstraintViolation);
  EXPECT_THROW(make_scaled(0.5, std::nan("")), ConstraintViolation);
}

TEST(Validate, NearDegenerateFlag) {
  EXPECT_TRUE(is_near_degenerate(make_scaled(0.75, 0.75 - 1e-5)));
  EXPECT_FALSE(is_near_degenerate(make_scaled(0.75, 0.1)));
}

TEST(Fixpoints, Catalogue) {
  const auto fp = fixpoints(make_scaled(0.75, 0.1));
  EXPECT_EQ(fp[0].label, FixpointLabel::kExtinct);
  EXPECT_EQ(fp[0].v_val, 0.0);
  EXPECT_EQ(fp[0].w_val, 0.0);
  EXPECT_EQ(fp[0].stability, Stability::kUnstable);
  EXPECT_EQ(fp[1].label, FixpointLabel::kUnphysical);
  EXPECT_NEAR(fp[1].w_val, 1.2, 1e-12);
  EXPECT_EQ(fp[1].stability, Stability::kUnphysical);
  EXPECT_EQ(fp[2].label, FixpointLabel::kResidentOnly);
  EXPECT_EQ(fp[2].stability, Stability::kUnstable);
  EXPECT_EQ(fp[3].label, FixpointLabel::kCoexistence);
  EXPECT_EQ(fp[3].v_val, 1.0);
  EXPECT_NEAR(fp[3].w_val, 0.866667, 1e-6);
  EXPECT_EQ(fp[3].stability, Stability::kStable);
}

TEST(Fixpoints, AreRootsOfTheReactionTerms) {
  for (double g : {0.25, 0.5, 0.75, 0.96}) {
    for (double b : {0.0, 0.05, 0.2}) {
      if (b >= g) continue;
      const ScaledParams s = make_scaled(g, b);
      for (const auto& f : fixpoints(s)) {
        EXPECT_NEAR(v_reaction(f.v_val), 0.0, 1e-15);
        EXPECT_NEAR(w_reaction(s, f.v_val, f.w_val), 0.0, 1e-15);
      }
    }
  }
}

TEST(Grid, MakeChecks) {
  EXPECT_THROW(Grid::make(0.0, 0.0, 10, 0.25), ConfigError);
  EXPECT_THROW(Grid::make(0.0, 0.1, 2, 0.25), ConfigError);
  EXPECT_THROW(Grid::make(0.0, 0.1, 10, 0.3), ConfigError);
  const Grid g = Grid::make(0.0, 0.1, 10, 0.2);
  EXPECT_NEAR(g.cfl(), 0.2, 1e-14);
}

TEST(Grid, DefaultWindow) {
  const Grid g = Grid::make_default();
  EXPECT_EQ(g.n_cells, 8000u);
  EXPECT_DOUBLE_EQ(g.dx, 0.05);
  EXPECT_NEAR(g.dt, 0.25 * 0.05 * 0.05, 1e-18);
  EXPECT_LT(g.x_left, 0.0);
  EXPECT_GT(g.x_right(), 0.0);
}

class InitialStateTest : public ::testing::Test {
 protected:
  static const WaveProfile& wave() {
    static const WaveProfile w = compute_profile(1e-6, 50.0);
    return w;
  }
};

TEST_F(InitialStateTest, HeavisideMutantAndWaveResident) {
  const ScaledParams s = make_scaled(0.75, 0.1);
  const Grid g = Grid::make_window(100.0, 0.05, 0.25, 50.0);
  const FieldState st = initial_state(g, s, wave(), 0.0);
  ASSERT_EQ(st.size(), g.n_cells);
  for (std::size_t i = 0; i < st.size(); ++i) {
    const double x = g.x_at(i);
    EXPECT_EQ(st.w[i], x <= 0.0 ? s.stable_w() : 0.0);
    EXPECT_GE(st.v[i], 0.0);
    EXPECT_LE(st.v[i], 1.0);
  }
  // x = 0 sits midway between nodes, so the average of the two neighbours is omega(0).
  const auto i0 = static_cast<std::size_t>(std::floor(-g.x_left / g.dx));
  EXPECT_NEAR(0.5 * (st.v[i0] + st.v[i0 + 1]), 0.5, 1e-3);
  EXPECT_NEAR(evaluate(wave(), 0.0), 0.5, 1e-6);
  EXPECT_LT(st.v.back(), 1e-15);
  EXPECT_EQ(st.window_offset, g.x_left);
}

TEST_F(InitialStateTest, RejectsGridWithoutOrigin) {
  const Grid g = Grid::make(1.0, 0.1, 50, 0.25);
  EXPECT_THROW(initial_state(g, make_scaled(0.75, 0.1), wave(), 0.0), ConfigError);
}

TEST(Errors, KindNames) {
  EXPECT_STREQ(to_string(ErrorKind::kConfig), "config");
  EXPECT_STREQ(to_string(ErrorKind::kNumericalBlowup), "numerical_blowup");
  EXPECT_STREQ(to_string(ErrorKind::kFrontLost), "front_lost");
  const ConfigError e("bad", 7);
  EXPECT_EQ(e.line(), 7);
  EXPECT_EQ(e.kind(), ErrorKind::kConfig);
}
