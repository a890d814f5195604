// Command line front end: one subcommand per experiment.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "invasion/config.hpp"
#include "invasion/errors.hpp"
#include "invasion/experiments.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string output_dir;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config_path, "key = value configuration file");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  sub->add_option("--output-dir", c.output_dir, "Output directory (overrides output_dir and INVASION_OUTPUT_DIR)");
  sub->add_option("--set", c.overrides, "Extra key=value assignment, applied after the file")
      ->type_name("KEY=VALUE");
}

invasion::ExperimentConfig build_config(const std::string& experiment, const Common& c) {
  invasion::ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = invasion::load_config(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw invasion::ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    invasion::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.experiment = experiment;
  if (!c.output_dir.empty()) cfg.output_dir = c.output_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the coupled F-KPP invasion model"};
  app.require_subcommand(1);
  app.set_version_flag("--version", invasion::version_string());

  Common common;
  const std::vector<std::pair<std::string, std::string>> config_commands{
      {"simulate", "Coupled PDE run: front track, speed fits, snapshots"},
      {"flat-baseline", "PDE run with v frozen at 1"},
      {"speed-scan", "Coupled and flat speeds across beta_list"},
      {"bridge-check", "Occupation tails and Laplace rates, exact vs Monte Carlo"},
      {"fk-check", "Feynman-Kac estimates against the PDE at time fk_t"},
      {"wave-profile", "Tabulated travelling wave and tail fit"},
  };
  for (const auto& [name, help] : config_commands) add_common(app.add_subcommand(name, help), common, false);

  auto* theory = app.add_subcommand("theory", "Speed prediction table on a (gamma~, beta~) grid");
  add_common(theory, common, false);
  std::vector<double> gammas;
  double beta_min = 0.0, beta_max = 0.0;
  std::size_t steps = 0;
  auto* o_gamma = theory->add_option("--gamma", gammas, "gamma~ value (repeatable)");
  auto* o_bmin = theory->add_option("--beta-min", beta_min, "Smallest beta~");
  auto* o_bmax = theory->add_option("--beta-max", beta_max, "Largest beta~");
  auto* o_steps = theory->add_option("--steps", steps, "Number of beta~ values per gamma~");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  invasion::ExperimentConfig cfg;
  try {
    cfg = build_config(experiment, common);
    if (experiment == "theory") {
      if (o_gamma->count() > 0) cfg.theory_gamma = gammas;
      if (o_bmin->count() > 0) cfg.beta_min = beta_min;
      if (o_bmax->count() > 0) cfg.beta_max = beta_max;
      if (o_steps->count() > 0) cfg.steps = steps;
    }
  } catch (const invasion::Error& e) {
    std::cerr << invasion::error_line(experiment, e) << '\n';
    return invasion::exit_code_for(e.kind());
  }

  const auto report = invasion::run_experiment(cfg, experiment == "theory" ? &std::cout : nullptr);
  if (report.exit_code != 0) {
    std::cerr << report.error_line << '\n';
    return report.exit_code;
  }
  if (experiment != "theory") {
    for (const auto& f : report.files) std::cout << report.output_dir << '/' << f << '\n';
  }
  return 0;
}
