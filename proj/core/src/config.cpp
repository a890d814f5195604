#include "invasion/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "invasion/errors.hpp"

namespace invasion {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError(key + ": not a number: '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": not a non-negative integer: '" + v + "'");
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

enum class Group { kGeneral, kPhysical, kScaled };

struct Key {
  const char* name;
  Group group;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Key dbl(const char* name, T ExperimentConfig::*m) {
  return {name, Group::kGeneral,
          [name, m](ExperimentConfig& c, const std::string& v) { c.*m = to_double(name, v); },
          [m](const ExperimentConfig& c) { return fmt(c.*m); }};
}

template <class T>
Key uint(const char* name, T ExperimentConfig::*m) {
  return {name, Group::kGeneral,
          [name, m](ExperimentConfig& c, const std::string& v) {
            c.*m = static_cast<T>(to_u64(name, v));
          },
          [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

Key list(const char* name, std::vector<double> ExperimentConfig::*m) {
  return {name, Group::kGeneral,
          [name, m](ExperimentConfig& c, const std::string& v) { c.*m = to_list(name, v); },
          [m](const ExperimentConfig& c) { return fmt_list(c.*m); }};
}

PhysicalParams& phys(ExperimentConfig& c) {
  if (!c.physical) c.physical = PhysicalParams{};
  return *c.physical;
}

Key physical(const char* name, double PhysicalParams::*m) {
  return {name, Group::kPhysical,
          [name, m](ExperimentConfig& c, const std::string& v) { phys(c).*m = to_double(name, v); },
          [m](const ExperimentConfig& c) { return c.physical ? fmt((*c.physical).*m) : std::string(); }};
}

Key scaled(const char* name, double ScaledParams::*m) {
  return {name, Group::kScaled,
          [name, m](ExperimentConfig& c, const std::string& v) { c.scaled.*m = to_double(name, v); },
          [m](const ExperimentConfig& c) { return fmt(c.scaled.*m); }};
}

const std::vector<Key>& table() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    k.push_back({"experiment", Group::kGeneral,
                 [](ExperimentConfig& c, const std::string& v) {
                   const auto& names = experiment_names();
                   if (std::find(names.begin(), names.end(), v) == names.end()) {
                     throw ConfigError("experiment: unknown experiment '" + v + "'");
                   }
                   c.experiment = v;
                 },
                 [](const ExperimentConfig& c) { return c.experiment; }});
    k.push_back({"output_dir", Group::kGeneral,
                 [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; },
                 [](const ExperimentConfig& c) { return c.output_dir; }});
    k.push_back(uint("seed", &ExperimentConfig::seed));
    k.push_back(uint("workers", &ExperimentConfig::workers));
    k.push_back(physical("alpha", &PhysicalParams::alpha));
    k.push_back(physical("beta", &PhysicalParams::beta));
    k.push_back(physical("gamma", &PhysicalParams::gamma));
    k.push_back(physical("K", &PhysicalParams::carrying_capacity));
    k.push_back(scaled("gamma_t", &ScaledParams::gamma_t));
    k.push_back(scaled("beta_t", &ScaledParams::beta_t));
    k.push_back(dbl("dx", &ExperimentConfig::dx));
    k.push_back(dbl("cfl", &ExperimentConfig::cfl));
    k.push_back(dbl("window_len", &ExperimentConfig::window_len));
    k.push_back(dbl("behind_origin", &ExperimentConfig::behind_origin));
    k.push_back(dbl("t_end", &ExperimentConfig::t_end));
    k.push_back(dbl("sample_dt", &ExperimentConfig::sample_dt));
    k.push_back(dbl("a_offset", &ExperimentConfig::a_offset));
    k.push_back(dbl("margin", &ExperimentConfig::margin));
    k.push_back(uint("shift_cells", &ExperimentConfig::shift_cells));
    k.push_back({"v_init", Group::kGeneral,
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v == "wave") {
                     c.v_init = VInit::kTravellingWave;
                   } else if (v == "heaviside") {
                     c.v_init = VInit::kHeaviside;
                   } else {
                     throw ConfigError("v_init: expected 'wave' or 'heaviside', got '" + v + "'");
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(c.v_init == VInit::kTravellingWave ? "wave" : "heaviside");
                 }});
    k.push_back(list("snapshot_times", &ExperimentConfig::snapshot_times));
    k.push_back(dbl("window_fraction", &ExperimentConfig::window_fraction));
    k.push_back(dbl("wave_tol", &ExperimentConfig::wave_tol));
    k.push_back(dbl("wave_half_width", &ExperimentConfig::wave_half_width));
    k.push_back(dbl("wave_dx", &ExperimentConfig::wave_dx));
    k.push_back(list("beta_list", &ExperimentConfig::beta_list));
    k.push_back({"bridge_study", Group::kGeneral,
                 [](ExperimentConfig& c, const std::string& v) {
                   if (v != "tail" && v != "laplace" && v != "both") {
                     throw ConfigError("bridge_study: expected tail, laplace or both, got '" + v + "'");
                   }
                   c.bridge_study = v;
                 },
                 [](const ExperimentConfig& c) { return c.bridge_study; }});
    k.push_back(dbl("bridge_t", &ExperimentConfig::bridge_t));
    k.push_back(dbl("bridge_alpha", &ExperimentConfig::bridge_alpha));
    k.push_back(dbl("bridge_K", &ExperimentConfig::bridge_K));
    k.push_back(list("bridge_s", &ExperimentConfig::bridge_s));
    k.push_back(list("bridge_lambda", &ExperimentConfig::bridge_lambda));
    k.push_back(uint("n_paths", &ExperimentConfig::n_paths));
    k.push_back(uint("n_steps", &ExperimentConfig::n_steps));
    k.push_back(dbl("fk_t", &ExperimentConfig::fk_t));
    k.push_back(list("fk_x", &ExperimentConfig::fk_x));
    k.push_back(uint("fk_panel", &ExperimentConfig::fk_panel));
    k.push_back(dbl("fk_span", &ExperimentConfig::fk_span));
    k.push_back(uint("fk_n_paths", &ExperimentConfig::fk_n_paths));
    k.push_back(uint("fk_n_steps", &ExperimentConfig::fk_n_steps));
    k.push_back(dbl("fk_frame_dt", &ExperimentConfig::fk_frame_dt));
    k.push_back(list("theory_gamma", &ExperimentConfig::theory_gamma));
    k.push_back(dbl("beta_min", &ExperimentConfig::beta_min));
    k.push_back(dbl("beta_max", &ExperimentConfig::beta_max));
    k.push_back(uint("steps", &ExperimentConfig::steps));
    return k;
  }();
  return keys;
}

const Key* find_key(const std::string& name) {
  for (const auto& k : table()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"simulate",    "flat-baseline", "speed-scan", "wave-profile",
                                              "bridge-check", "fk-check",      "theory"};
  return names;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& k : table()) out.emplace_back(k.name);
    return out;
  }();
  return names;
}

ScaledParams ExperimentConfig::resolved_scaled() const {
  if (physical) return rescale(*physical);
  validate(scaled);
  return scaled;
}

Grid ExperimentConfig::grid() const { return Grid::make_window(window_len, dx, cfl, behind_origin); }

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const Key* k = find_key(key);
  if (k == nullptr) throw ConfigError("unknown key '" + key + "'");
  k->set(cfg, value);
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::vector<std::string> seen;
  int physical_line = 0, scaled_line = 0;
  std::vector<std::string> physical_keys;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (line == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const Key* k = find_key(key);
    if (k == nullptr) throw ConfigError("unknown key '" + key + "'", line);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError("duplicate key '" + key + "'", line);
    }
    seen.push_back(key);
    if (k->group == Group::kPhysical) {
      if (scaled_line != 0) {
        throw ConfigError("physical and scaled parameters given together (scaled on line " +
                              std::to_string(scaled_line) + ")",
                          line);
      }
      if (physical_line == 0) physical_line = line;
      physical_keys.push_back(key);
    } else if (k->group == Group::kScaled) {
      if (physical_line != 0) {
        throw ConfigError("physical and scaled parameters given together (physical on line " +
                              std::to_string(physical_line) + ")",
                          line);
      }
      if (scaled_line == 0) scaled_line = line;
    }
    try {
      k->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line);
    }
  }
  if (physical_line != 0 && physical_keys.size() != 4) {
    throw ConfigError("physical parameters need all of alpha, beta, gamma, K", physical_line);
  }
  return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& k : table()) {
    if (k.group == Group::kPhysical && !cfg.physical) continue;
    if (k.group == Group::kScaled && cfg.physical) continue;
    out += k.name;
    out += " = ";
    out += k.get(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace invasion
