#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "thickflow/config.hpp"
#include "thickflow/errors.hpp"
#include "thickflow/experiment.hpp"
#include "thickflow/io.hpp"

using namespace thickflow;

namespace {

int with_config(const std::string& path, const std::function<int(const Config&)>& fn) {
  Config cfg;
  try {
    cfg = load_config(path);
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const ValidationError& e) {
    std::cerr << "config invalid:\n";
    for (const auto& i : e.issues) std::cerr << "  " << i << "\n";
    return exit_config;
  }
  return fn(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thickflow: power-law and constrained compressible flow experiments"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string config_path, dir, policy = "strict";
  app.add_option("--jobs", opts.jobs, "concurrent sweep members")->check(CLI::PositiveNumber);
  app.add_option("--output", opts.output_dir, "output directory, overrides the config");
  app.add_flag("--quiet", opts.quiet, "suppress the report table");

  auto* run = app.add_subcommand("run", "run one configuration");
  run->add_option("config", config_path)->required();
  auto* sweep = app.add_subcommand("sweep", "run the [sweep] section of a configuration");
  sweep->add_option("config", config_path)->required();
  auto* ver = app.add_subcommand("verify", "check the JSON reports under a directory");
  ver->add_option("dir", dir)->required();
  ver->add_option("--policy", policy)->check(CLI::IsMember({"strict", "tolerant"}));
  auto* banks = app.add_subcommand("banks", "dump the seeded test banks as JSON");
  banks->add_option("config", config_path)->required();

  for (auto* sub : {run, sweep, ver, banks}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*run)
      return with_config(config_path, [&](const Config& c) { return run_experiment(c, opts, std::cout, std::cerr); });
    if (*sweep)
      return with_config(config_path,
                         [&](const Config& c) { return run_sweep_experiment(c, opts, std::cout, std::cerr); });
    if (*ver) return verify(dir, policy == "tolerant" ? Policy::tolerant : Policy::strict, std::cout, std::cerr);
    if (*banks)
      return with_config(config_path, [&](const Config& c) {
        const nlohmann::json j = banks_json(c);
        if (!opts.output_dir.empty()) write_json(opts.output_dir + "/banks.json", j);
        if (!opts.quiet) std::cout << j.dump(2) << "\n";
        return int(exit_ok);
      });
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_solver;
  }
  return exit_config;
}
