// Experiment runner CLI: run / list / schema.  Exit codes: 0 success,
// 1 numerical contract violation, 2 config error, 3 budget exceeded.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "jetplane/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"jetplane: planar complex-analysis experiments"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir, set_spec_path;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("--config", config_path, "path to the experiment config JSON")
      ->required();
  run->add_option("--threads", threads, "worker thread count (default: OpenMP runtime)");
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--set-spec", set_spec_path, "sample JSON file overriding the config set");

  CLI::App* list = app.add_subcommand("list", "list experiments, sets, and functions");
  CLI::App* schema = app.add_subcommand("schema", "print the config JSON schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    std::fputs(jetplane::list_catalog().c_str(), stdout);
    return 0;
  }
  if (schema->parsed()) {
    std::fputs((jetplane::config_schema().dump(2) + "\n").c_str(), stdout);
    return 0;
  }
  if (!run->parsed()) {
    std::fputs(app.help().c_str(), stdout);
    return 0;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  jetplane::ExperimentConfig cfg;
  try {
    jetplane::json raw = jetplane::json::parse(jetplane::read_file(config_path));
    if (!set_spec_path.empty()) raw["set"] = jetplane::json{{"file", set_spec_path}};
    cfg = jetplane::config_from_json(raw);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    std::vector<std::string> files = jetplane::run_experiment(cfg);
    for (const std::string& f : files)
      std::fprintf(stdout, "%s/%s\n", cfg.out_dir.c_str(), f.c_str());
    return 0;
  } catch (const jetplane::BudgetExceeded& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return 3;
  } catch (const jetplane::NonFiniteValue& e) {
    std::fprintf(stderr, "numerical contract violation: %s\n", e.what());
    return 1;
  } catch (const jetplane::json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
