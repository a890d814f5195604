#include "invasion/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "invasion/errors.hpp"

namespace invasion {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t steps_for(double time, double dt) {
  return static_cast<std::int64_t>(std::llround(time / dt));
}

double sample_field(const std::vector<double>& f, double x_left, double dx, double x,
                    double left_value, double right_value) {
  const double pos = (x - x_left) / dx;
  if (pos < 0.0) return left_value;
  if (pos > static_cast<double>(f.size() - 1)) return right_value;
  std::size_t j = static_cast<std::size_t>(pos);
  if (j >= f.size() - 1) j = f.size() - 2;
  const double s = pos - static_cast<double>(j);
  return f[j] + s * (f[j + 1] - f[j]);
}

}  // namespace

Stepper::Stepper(const ScaledParams& s, const Grid& grid, BoundaryValues bc, VMode mode)
    : s_(s), grid_(grid), bc_(bc), mode_(mode), v_next_(grid.n_cells), w_next_(grid.n_cells) {
  if (grid.cfl() > kDefaultCflMax * (1.0 + 1e-12)) {
    throw ConfigError("stepper: cfl exceeds the explicit stability limit");
  }
}

void Stepper::advance(FieldState& st) {
  const std::size_t n = st.size();
  const double dt = grid_.dt;
  const double r = 0.5 * dt / (grid_.dx * grid_.dx);
  const double wmax = s_.stable_w();
  const double base = 1.0 - s_.beta_t;
  const double cv = 1.0 - s_.gamma_t;
  const double cw = s_.gamma_t;
  const double* v = st.v.data();
  const double* w = st.w.data();
  double* vn = v_next_.data();
  double* wn = w_next_.data();
  std::uint64_t bad = 0;
  std::uint64_t clamps = 0;

  if (mode_ == VMode::kEvolve) {
    auto upd_v = [&](std::size_t i, double vl, double vr) {
      const double x = v[i] + r * (vl - 2.0 * v[i] + vr) + dt * v[i] * (1.0 - v[i]);
      bad += static_cast<std::uint64_t>(x != x);
      clamps += static_cast<std::uint64_t>((x < 0.0) | (x > 1.0));
      vn[i] = std::min(std::max(x, 0.0), 1.0);
    };
    upd_v(0, bc_.left_v, v[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double x = v[i] + r * (v[i - 1] - 2.0 * v[i] + v[i + 1]) + dt * v[i] * (1.0 - v[i]);
      bad += static_cast<std::uint64_t>(x != x);
      clamps += static_cast<std::uint64_t>((x < 0.0) | (x > 1.0));
      vn[i] = std::min(std::max(x, 0.0), 1.0);
    }
    upd_v(n - 1, v[n - 2], bc_.right_v);
  }

  auto upd_w = [&](std::size_t i, double wl, double wr) {
    const double x = w[i] + r * (wl - 2.0 * w[i] + wr) + dt * (base - cv * v[i] - cw * w[i]) * w[i];
    bad += static_cast<std::uint64_t>(x != x);
    clamps += static_cast<std::uint64_t>((x < 0.0) | (x > wmax));
    wn[i] = std::min(std::max(x, 0.0), wmax);
  };
  upd_w(0, bc_.left_w, w[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = w[i] + r * (w[i - 1] - 2.0 * w[i] + w[i + 1]) +
                     dt * (base - cv * v[i] - cw * w[i]) * w[i];
    bad += static_cast<std::uint64_t>(x != x);
    clamps += static_cast<std::uint64_t>((x < 0.0) | (x > wmax));
    wn[i] = std::min(std::max(x, 0.0), wmax);
  }
  upd_w(n - 1, w[n - 2], bc_.right_w);

  if (bad != 0) {
    std::ostringstream os;
    os << "step: non-finite field value at step " << (st.step_index + 1);
    throw NumericalBlowup(os.str(), (st.step_index + 1));
  }
  if (mode_ == VMode::kEvolve) st.v.swap(v_next_);
  st.w.swap(w_next_);
  st.clamp_events += clamps;
  ++st.step_index;
  st.time = static_cast<double>(st.step_index) * dt;
}

FieldState step(const FieldState& state, const ScaledParams& s, const Grid& grid) {
  return step(state, s, grid, BoundaryValues::standard(s));
}

FieldState step(const FieldState& state, const ScaledParams& s, const Grid& grid,
                const BoundaryValues& bc) {
  if (state.size() != grid.n_cells) throw ConfigError("step: state size does not match grid");
  FieldState out = state;
  Stepper stepper(s, grid, bc);
  stepper.advance(out);
  return out;
}

double front_position(std::span<const double> f, double level, double x_left, double dx) {
  const std::size_t n = f.size();
  for (std::size_t i = n; i-- > 1;) {
    if (f[i - 1] >= level && f[i] < level) {
      const double frac = (f[i - 1] - level) / (f[i - 1] - f[i]);
      return x_left + (static_cast<double>(i - 1) + frac) * dx;
    }
  }
  std::ostringstream os;
  os << "front_position: field never crosses level " << level;
  throw FrontLost(os.str());
}

double front_position(std::span<const double> field, double level, const Grid& grid) {
  return front_position(field, level, grid.x_left, grid.dx);
}

std::size_t shift_window(FieldState& st, const Grid& grid, double margin,
                         std::size_t shift_cells, const BoundaryValues& bc, bool key_on_w,
                         double level) {
  const std::size_t n = st.size();
  const double dx = grid.dx;
  const double front = front_position(key_on_w ? st.w : st.v, level, st.window_offset, dx);
  const double x_right = st.window_offset + static_cast<double>(n - 1) * dx;
  const double deficit = margin - (x_right - front);
  if (deficit <= 0.0 || shift_cells == 0) return 0;
  const auto blocks = static_cast<std::size_t>(std::ceil(deficit / (dx * static_cast<double>(shift_cells))));
  const std::size_t k = std::min(blocks * shift_cells, n);
  std::move(st.v.begin() + static_cast<std::ptrdiff_t>(k), st.v.end(), st.v.begin());
  std::move(st.w.begin() + static_cast<std::ptrdiff_t>(k), st.w.end(), st.w.begin());
  std::fill(st.v.end() - static_cast<std::ptrdiff_t>(k), st.v.end(), bc.right_v);
  std::fill(st.w.end() - static_cast<std::ptrdiff_t>(k), st.w.end(), bc.right_w);
  st.window_offset += static_cast<double>(k) * dx;
  st.shifted_cells += static_cast<std::int64_t>(k);
  return k;
}

RunResult simulate(const ScaledParams& s, const Grid& grid, const WaveProfile& wave,
                   const RunOptions& opt) {
  if (!(opt.t_end >= 0.0)) throw ConfigError("simulate: t_end must be >= 0");
  if (!(opt.sample_dt > 0.0)) throw ConfigError("simulate: sample_dt must be > 0");
  const bool frozen = opt.v_mode == VMode::kFrozen;
  if (frozen && !opt.with_mutant) throw ConfigError("simulate: frozen v requires the mutant field");

  BoundaryValues bc = BoundaryValues::standard(s);
  if (frozen) bc.right_v = 1.0;
  if (!opt.with_mutant) bc.left_w = 0.0;

  RunResult res;
  FieldState st;
  if (opt.with_mutant && !frozen && opt.v_init == VInit::kTravellingWave) {
    st = initial_state(grid, s, wave, opt.a);
  } else {
    if (!(grid.x_left < 0.0 && grid.x_right() > 0.0)) {
      throw ConfigError("simulate: grid does not contain x = 0 in its interior");
    }
    st.v.resize(grid.n_cells);
    st.w.resize(grid.n_cells);
    st.window_offset = grid.x_left;
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      const double x = grid.x_at(i);
      if (frozen) {
        st.v[i] = 1.0;
      } else if (opt.v_init == VInit::kHeaviside) {
        st.v[i] = x <= 0.0 ? 1.0 : 0.0;
      } else {
        st.v[i] = evaluate(wave, x + opt.a);
      }
      st.w[i] = (opt.with_mutant && x <= 0.0) ? s.stable_w() : 0.0;
    }
  }

  Stepper stepper(s, grid, bc, opt.v_mode);
  FrontTrack& tr = res.track;
  tr.level_v = 0.5;
  tr.level_w = 0.5 * s.stable_w();
  const bool track_v = !frozen;
  const bool track_w = opt.with_mutant;
  const bool key_on_w = frozen;
  const double key_level = key_on_w ? tr.level_w : tr.level_v;
  const double dx = grid.dx;
  res.probe_w.assign(opt.probe_points.size(), {});
  res.trajectory.dx = dx;

  auto record = [&] {
    tr.times.push_back(st.time);
    tr.x_front_v.push_back(track_v ? front_position(st.v, tr.level_v, st.window_offset, dx) : kNaN);
    tr.x_front_w.push_back(track_w ? front_position(st.w, tr.level_w, st.window_offset, dx) : kNaN);
    tr.clamp_events.push_back(st.clamp_events);
    for (std::size_t p = 0; p < opt.probe_points.size(); ++p) {
      res.probe_w[p].push_back(sample_field(st.w, st.window_offset, dx, opt.probe_points[p],
                                            bc.left_w, bc.right_w));
    }
  };
  auto snapshot = [&] {
    Snapshot snap;
    snap.time = st.time;
    snap.x.resize(st.size());
    for (std::size_t i = 0; i < st.size(); ++i) snap.x[i] = st.window_offset + static_cast<double>(i) * dx;
    snap.v = st.v;
    snap.w = st.w;
    res.snapshots.push_back(std::move(snap));
  };
  auto frame = [&] {
    res.trajectory.times.push_back(st.time);
    res.trajectory.x_left.push_back(st.window_offset);
    res.trajectory.w.push_back(st.w);
  };

  const double dt = grid.dt;
  const std::int64_t n_steps = steps_for(opt.t_end, dt);
  const std::int64_t per_sample = std::max<std::int64_t>(1, steps_for(opt.sample_dt, dt));
  const std::int64_t shift_every = std::max<std::int64_t>(1, std::min<std::int64_t>(per_sample, 200));
  std::int64_t per_frame = 0;
  if (opt.trajectory_dt > 0.0) per_frame = std::max<std::int64_t>(1, steps_for(opt.trajectory_dt, dt));
  std::vector<std::int64_t> snap_steps;
  for (double ts : opt.snapshot_times) {
    if (ts < 0.0 || ts > opt.t_end) throw ConfigError("simulate: snapshot time outside [0, t_end]");
    snap_steps.push_back(steps_for(ts, dt));
  }
  std::sort(snap_steps.begin(), snap_steps.end());
  std::size_t next_snap = 0;

  auto on_step = [&](std::int64_t k) {
    if (k % shift_every == 0 && opt.margin > 0.0) {
      shift_window(st, grid, opt.margin, opt.shift_cells, bc, key_on_w, key_level);
    }
    if (k % per_sample == 0) record();
    if (per_frame > 0 && k % per_frame == 0) frame();
    while (next_snap < snap_steps.size() && snap_steps[next_snap] == k) {
      snapshot();
      ++next_snap;
    }
  };

  on_step(0);
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    stepper.advance(st);
    on_step(k);
  }
  if (tr.times.back() != st.time) record();

  res.final_grid = grid;
  res.final_grid.x_left = st.window_offset;
  res.final_state = std::move(st);
  return res;
}

FrontTrack run(const ScaledParams& s, const Grid& grid, double t_end, double sample_dt, double a,
               const WaveProfile& wave) {
  if (!(t_end >= 0.0)) throw ConfigError("run: t_end must be >= 0");
  RunOptions opt;
  opt.t_end = t_end;
  opt.sample_dt = sample_dt;
  opt.a = a;
  return simulate(s, grid, wave, opt).track;
}

FrontTrack run_flat_background(const ScaledParams& s, const Grid& grid, double t_end,
                               double sample_dt) {
  RunOptions opt;
  opt.t_end = t_end;
  opt.sample_dt = sample_dt;
  opt.v_mode = VMode::kFrozen;
  return simulate(s, grid, WaveProfile{}, opt).track;
}

}  // namespace invasion
