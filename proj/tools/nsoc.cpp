// Command-line front end: nsoc <task> --config path [--out dir] [--seed n]
#include "nsoc/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of a nonsmooth semilinear elliptic equation"};
  std::string task;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("task", task, "solve-state | optimize | verify | bouligand-limit | wset-limit | convergence-study")
      ->required();
  app.add_option("--config", config_path, "JSON problem description")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "random seed (overrides seed)");
  CLI11_PARSE(app, argc, argv);

  nsoc::RunConfig cfg;
  try {
    cfg = nsoc::parse_config(config_path);
    cfg.task = nsoc::parse_task(task);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return nsoc::kExitSolverError;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (seed) cfg.seed = *seed;

  const nsoc::RunOutcome res = nsoc::run(cfg);
  if (!res.message.empty()) std::cerr << "error: " << res.message << '\n';
  std::cout << nsoc::to_string(cfg.task) << ": "
            << (res.exit_code == nsoc::kExitPass ? "pass" : res.exit_code == nsoc::kExitVerdictFail ? "fail" : "error")
            << " (report in " << (cfg.output_dir / "report.json").string() << ")\n";
  return res.exit_code;
}
