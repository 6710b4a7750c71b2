// qsl: stochastic trajectories, master equations and closed forms for a
// driven two-level system subject to classical noise
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsl/commands.hpp"

namespace {

struct ScenarioArgs {
  std::string preset, config, frame;
  double dt = 0.0, t_final = 0.0;
  long n = 0;
  std::uint64_t seed = 0;
};

void add_scenario_options(CLI::App* sub, ScenarioArgs& a) {
  auto* p = sub->add_option("--preset", a.preset, "named scenario (see the preset-list command)");
  auto* c = sub->add_option("--config", a.config, "JSON scenario file");
  p->excludes(c);
  c->excludes(p);
  sub->add_option("--frame", a.frame, "override the frame: lab, rwa or rwa-naive");
  sub->add_option("--seed", a.seed, "override the RNG seed");
  sub->add_option("--n", a.n, "override the number of realizations");
  sub->add_option("--dt", a.dt, "override the time step");
  sub->add_option("--t-final", a.t_final, "override the final time");
}

qsl::LoadedScenario resolve_scenario(const CLI::App* sub, const ScenarioArgs& a) {
  qsl::LoadedScenario ls;
  if (!a.preset.empty())
    ls = qsl::preset(a.preset);
  else if (!a.config.empty())
    ls = qsl::parse_scenario_file(a.config);
  else
    throw qsl::ConfigError("pass --preset NAME or --config FILE");
  if (sub->count("--frame")) ls.scenario.frame = qsl::frame_from_name(a.frame);
  if (sub->count("--seed")) ls.scenario.seed = a.seed;
  if (sub->count("--n")) ls.scenario.n_realizations = a.n;
  if (sub->count("--dt")) ls.scenario.grid.dt = a.dt;
  if (sub->count("--t-final")) ls.scenario.grid.t_final = a.t_final;
  ls.scenario.validate();
  return ls;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "driven two-level system under classical noise: stochastic trajectories, "
      "Lindblad master equations and rotating-frame closed forms"};
  app.name("qsl");
  app.require_subcommand(1);

  ScenarioArgs sim_args, master_args, analytic_args, compare_args;
  qsl::CommonIo sim_io, master_io, analytic_io, compare_io;
  std::string master_mode = "static";
  std::string compare_pair;

  CLI::App* sim = app.add_subcommand("sim", "ensemble of stochastic trajectories");
  add_scenario_options(sim, sim_args);
  sim->add_option("--out", sim_io.out, "series CSV path (t, mean_pb, std_pb)");
  sim->add_option("--hist-out", sim_io.hist_out, "terminal histogram CSV path");
  sim->add_option("--paths-out", sim_io.paths_out, "per-realization survival CSV path");
  sim->add_option("--threads", sim_io.threads, "worker threads (0 = hardware)");
  sim->add_option("--bins", sim_io.bins, "histogram bin count");

  CLI::App* master = app.add_subcommand("master", "Lindblad master equation");
  add_scenario_options(master, master_args);
  master->add_option("--mode", master_mode, "dissipator: static or time-local");
  master->add_option("--out", master_io.out, "series CSV path (t, rho_bb, re/im rho_ba, purity)");

  CLI::App* analytic = app.add_subcommand("analytic", "closed-form rotating-frame solution");
  add_scenario_options(analytic, analytic_args);
  analytic->add_option("--out", analytic_io.out, "series CSV path");

  CLI::App* compare = app.add_subcommand("compare", "cross-validate two solvers");
  add_scenario_options(compare, compare_args);
  compare->add_option("--pair", compare_pair,
                      "sde-vs-master, master-vs-analytic or rwa-vs-naive")
      ->required();
  compare->add_option("--out", compare_io.out, "report JSON path (default: stdout)");
  compare->add_option("--threads", compare_io.threads, "worker threads (0 = hardware)");
  compare->add_option("--bins", compare_io.bins, "histogram bin count");

  CLI::App* plist = app.add_subcommand("preset-list", "list the named scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qsl::exit_code::config;
  }

  try {
    if (app.got_subcommand(plist)) return qsl::cmd_preset_list(std::cout);
    if (app.got_subcommand(sim)) return qsl::cmd_sim(resolve_scenario(sim, sim_args), sim_io);
    if (app.got_subcommand(master)) {
      qsl::DissipatorMode mode;
      if (master_mode == "static")
        mode = qsl::DissipatorMode::Static;
      else if (master_mode == "time-local")
        mode = qsl::DissipatorMode::TimeLocalRwa;
      else
        throw qsl::ConfigError("unknown --mode '" + master_mode +
                               "' (expected static or time-local)");
      return qsl::cmd_master(resolve_scenario(master, master_args), mode, master_io);
    }
    if (app.got_subcommand(analytic))
      return qsl::cmd_analytic(resolve_scenario(analytic, analytic_args), analytic_io);
    if (app.got_subcommand(compare))
      return qsl::cmd_compare(resolve_scenario(compare, compare_args), compare_pair, compare_io);
  } catch (const qsl::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qsl::exit_code::config;
  } catch (const qsl::IntegrationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qsl::exit_code::integration;
  } catch (const qsl::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qsl::exit_code::io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qsl::exit_code::failure;
  }
  return qsl::exit_code::failure;  // unreachable: a subcommand is required
}
