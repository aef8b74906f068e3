#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mmhb/config.hpp"
#include "mmhb/error.hpp"
#include "mmhb/experiments.hpp"
#include "mmhb/parallel.hpp"

namespace {

int exit_code_for(mmhb::ErrorKind k) {
  switch (k) {
    case mmhb::ErrorKind::AssumptionViolated:
    case mmhb::ErrorKind::PreconditionViolated:
      return mmhb::kExitAssumption;
    default:
      return mmhb::kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Momentum methods on min-max games"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", repro_name;
  int jobs = 0;
  std::optional<std::uint64_t> seed;

  const char* names[] = {"simulate", "compare-models", "heatmap", "rates",
                         "slopes", "optimal-beta", "repro"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    auto* cfg_opt = sub->add_option("--config,-c", config_path, "JSON config file");
    sub->add_option("--out,-o", out_dir, "output directory (MMHB_OUT overrides)");
    sub->add_option("--jobs,-j", jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "override the game and init seeds");
    if (std::string(name) == "repro")
      sub->add_option("name", repro_name, "bundle name")->excludes(cfg_opt);
    else
      cfg_opt->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : mmhb::kExitConfig;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const char* env = std::getenv("MMHB_OUT");
  const bool env_out = env && *env;
  if (env_out) out_dir = env;
  if (jobs <= 0) jobs = mmhb::default_jobs();

  try {
    mmhb::RunResult res;
    if (cmd == "repro" && config_path.empty()) {
      if (repro_name.empty()) {
        std::cerr << "error: repro needs a bundle name or --config; bundles:";
        for (const auto& n : mmhb::repro_names()) std::cerr << " " << n;
        std::cerr << "\n";
        return mmhb::kExitConfig;
      }
      res = mmhb::cmd_repro(repro_name, out_dir, jobs);
    } else {
      const mmhb::ExperimentConfig cfg = mmhb::load_config(config_path, seed);
      if (cfg.experiment != cmd)
        throw mmhb::Error(mmhb::ErrorKind::ConfigError,
                          "field 'experiment': config is '" + cfg.experiment + "' but the command is '" +
                              cmd + "'");
      // precedence: MMHB_OUT, then --out, then the config's "out"
      const bool out_given = env_out || app.get_subcommands().front()->count("--out") > 0;
      res = mmhb::run_experiment(cfg, out_given ? out_dir : cfg.out.value_or(out_dir), jobs);
    }
    for (const auto& f : res.files) std::cout << f.string() << "\n";
    if (res.summary.contains("error")) std::cerr << res.summary["error"].get<std::string>() << "\n";
    return res.exit_code;
  } catch (const mmhb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mmhb::kExitConfig;
  }
}
