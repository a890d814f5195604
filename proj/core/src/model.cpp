#include "invasion/model.hpp"

#include <cmath>
#include <sstream>

#include "invasion/errors.hpp"

namespace invasion {

namespace {

[[noreturn]] void violated(const std::string& inequality, const std::string& values) {
  throw ConstraintViolation("constraint violated: " + inequality + " (" + values + ")");
}

std::string fmt_pair(const char* a, double av, const char* b, double bv) {
  std::ostringstream os;
  os.precision(17);
  os << a << "=" << av << ", " << b << "=" << bv;
  return os.str();
}

}  // namespace

void validate(const ScaledParams& s) {
  if (!(std::isfinite(s.gamma_t) && std::isfinite(s.beta_t))) {
    violated("finite parameters", fmt_pair("gamma_t", s.gamma_t, "beta_t", s.beta_t));
  }
  if (!(s.gamma_t < 1.0)) violated("1 > gamma_t", fmt_pair("gamma_t", s.gamma_t, "beta_t", s.beta_t));
  if (!(s.gamma_t > s.beta_t)) violated("gamma_t > beta_t", fmt_pair("gamma_t", s.gamma_t, "beta_t", s.beta_t));
  if (!(s.beta_t >= 0.0)) violated("beta_t >= 0", fmt_pair("gamma_t", s.gamma_t, "beta_t", s.beta_t));
}

ScaledParams make_scaled(double gamma_t, double beta_t) {
  ScaledParams s{gamma_t, beta_t};
  validate(s);
  return s;
}

ScaledParams rescale(const PhysicalParams& p) {
  const double K = p.carrying_capacity;
  if (!(p.alpha > 0.0)) violated("alpha > 0", fmt_pair("alpha", p.alpha, "gamma", p.gamma));
  if (!(K > 0.0)) violated("K > 0", fmt_pair("K", K, "beta", p.beta));
  if (!(p.beta >= 0.0)) violated("beta/K >= 0", fmt_pair("beta", p.beta, "K", K));
  if (!(p.alpha > p.gamma)) violated("alpha > gamma", fmt_pair("alpha", p.alpha, "gamma", p.gamma));
  if (!(p.gamma > p.beta / K)) violated("gamma > beta/K", fmt_pair("gamma", p.gamma, "beta/K", p.beta / K));
  ScaledParams s{p.gamma / p.alpha, (p.beta / p.alpha) / K};
  validate(s);
  return s;
}

bool is_near_degenerate(const ScaledParams& s, double relative_gap) {
  return (s.gamma_t - s.beta_t) < relative_gap * s.gamma_t;
}

const char* to_string(FixpointLabel label) {
  switch (label) {
    case FixpointLabel::kExtinct: return "extinct";
    case FixpointLabel::kUnphysical: return "unphysical";
    case FixpointLabel::kResidentOnly: return "resident_only";
    case FixpointLabel::kCoexistence: return "coexistence";
  }
  return "?";
}

const char* to_string(Stability stability) {
  switch (stability) {
    case Stability::kStable: return "stable";
    case Stability::kUnstable: return "unstable";
    case Stability::kUnphysical: return "unphysical";
  }
  return "?";
}

std::array<Fixpoint, 4> fixpoints(const ScaledParams& s) {
  return {{
      {0.0, 0.0, FixpointLabel::kExtinct, Stability::kUnstable},
      {0.0, (1.0 - s.beta_t) / s.gamma_t, FixpointLabel::kUnphysical, Stability::kUnphysical},
      {1.0, 0.0, FixpointLabel::kResidentOnly, Stability::kUnstable},
      {1.0, s.stable_w(), FixpointLabel::kCoexistence, Stability::kStable},
  }};
}

Grid Grid::make(double x_left, double dx, std::size_t n_cells, double cfl, double cfl_max) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("grid: dx must be > 0");
  if (n_cells < 3) throw ConfigError("grid: n_cells must be >= 3");
  if (!(cfl > 0.0)) throw ConfigError("grid: cfl must be > 0");
  if (cfl > cfl_max) {
    std::ostringstream os;
    os << "grid: cfl " << cfl << " exceeds cfl_max " << cfl_max;
    throw ConfigError(os.str());
  }
  return Grid{x_left, dx, n_cells, cfl * dx * dx};
}

Grid Grid::make_window(double window_len, double dx, double cfl, double behind_origin) {
  if (!(window_len > 0.0)) throw ConfigError("grid: window_len must be > 0");
  const auto n = static_cast<std::size_t>(std::llround(window_len / dx));
  return make(-behind_origin + 0.5 * dx, dx, n, cfl);
}

Grid Grid::make_default() { return make_window(400.0, 0.05, 0.25, 100.0); }

FieldState initial_state(const Grid& grid, const ScaledParams& s, const WaveProfile& wave,
                         double a) {
  if (!(grid.x_left < 0.0 && grid.x_right() > 0.0)) {
    throw ConfigError("initial_state: grid does not contain x = 0 in its interior");
  }
  FieldState state;
  state.v.resize(grid.n_cells);
  state.w.resize(grid.n_cells);
  state.window_offset = grid.x_left;
  const double w_stable = s.stable_w();
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double x = grid.x_at(i);
    state.v[i] = evaluate(wave, x + a);
    state.w[i] = x <= 0.0 ? w_stable : 0.0;
  }
  return state;
}

}  // namespace invasion
