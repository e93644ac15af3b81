#include "support.hpp"

#include "nsoc/config.hpp"
#include "nsoc/run.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <random>

using namespace nsoc;
using namespace nsoc::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("nsoc_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& task, const fs::path& config, const fs::path& out) {
  const fs::path log = out.parent_path() / (out.filename().string() + ".log");
  const std::string cmd = std::string(NSOC_CLI_PATH) + " " + task + " --config " + config.string() + " --out " +
                          out.string() + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json read_json(const fs::path& p) { return Json::parse(read_text(p)); }

}  // namespace

TEST_CASE("minimal config uses defaults") {
  const RunConfig c = parse_config_text("{}");
  CHECK(c.task == Task::SolveState);
  CHECK(c.problem.grid->nx() >= 3);
  CHECK(c.problem.kappa_omega > 0.0);
  CHECK_FALSE(c.problem.u_b.has_value());
  CHECK(norm_max(c.controls.u) == 0.0);
}

TEST_CASE("invalid configs are rejected with a location") {
  const std::string bad = "{\n  \"grid\": {\"nx\": 9, \"ny\": 9},\n  \"kappa_omega\": 0\n}";
  try {
    parse_config_text(bad);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("kappa_omega") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("{\"kapa_omega\": 1}"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{\"nonlinearity\": {\"kind\": \"wavy\"}}"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{\"y_omega\": {\"csv\": \"missing_file.csv\"}}"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{\"b\": -1}"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{\"grid\": {\"nx\": 9,}"), ConfigError);
}

TEST_CASE("expression targets are sampled at the nodes") {
  const RunConfig c = parse_config_text(
      R"({"grid": {"nx": 9, "ny": 5}, "y_omega": "sin(pi*x1)*x2^2", "y_gamma": 0.25})");
  const Field oracle =
      Field::sample(c.problem.grid, [](double x, double y) { return std::sin(std::numbers::pi * x) * y * y; });
  CHECK(norm_max(c.problem.y_omega - oracle) <= 1e-14);
  CHECK((c.problem.y_gamma.values.array() - 0.25).abs().maxCoeff() == 0.0);
}

TEST_CASE("CSV round trip keeps every digit") {
  std::mt19937_64 rng(60);
  const GridPtr g = unit_square(9);
  const Field f = random_field(g, rng);
  const BoundaryField h = random_boundary(g, rng);
  CHECK(norm_max(field_from_csv(field_to_csv(f), g) - f) == 0.0);
  CHECK((boundary_from_csv(boundary_to_csv(h), g).values - h.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(grid_from_csv(field_to_csv(f))->num_nodes() == g->num_nodes());
  CHECK_THROWS(field_from_csv(field_to_csv(f), unit_square(5)));

  const fs::path d = scratch("csv");
  write_field_csv(d / "f.csv", f);
  const RunConfig c = parse_config_text(
      R"({"grid": {"nx": 9, "ny": 9}, "controls": {"u": {"csv": "f.csv"}}})", d);
  CHECK(norm_max(c.controls.u - f) == 0.0);
}

TEST_CASE("solve-state end to end") {
  const fs::path d = scratch("solve");
  write_text(d / "cfg.json",
             R"({"grid": {"nx": 9, "ny": 9}, "nonlinearity": {"kind": "max0"},
                 "controls": {"u": 2, "v": 2}})");
  REQUIRE(run_cli("solve-state", d / "cfg.json", d / "out") == 0);
  const Json rep = read_json(d / "out" / "report.json");
  CHECK(rep["task"] == "solve-state");
  CHECK(rep["verdicts"]["converged"] == true);
  CHECK(std::abs(rep["state"]["min"].get<double>() - 2.0) <= 1e-9);
  CHECK(std::abs(rep["state"]["max"].get<double>() - 2.0) <= 1e-9);
  CHECK(fs::exists(d / "out" / "y.csv"));
  CHECK(fs::exists(d / "out" / "manifest.json"));

  CHECK(run_cli("no-such-task", d / "cfg.json", d / "bad") != 0);
}

TEST_CASE("optimize then verify the written controls") {
  const fs::path d = scratch("opt");
  const std::string problem =
      R"("grid": {"nx": 9, "ny": 9}, "nonlinearity": {"kind": "smooth"},
         "y_omega": "1 + x1*x2", "y_gamma": 0.5, "alpha": 1, "kappa_omega": 0.1, "kappa_gamma": 0.1,
         "verify": {"probes": 20}, "seed": 4)";
  write_text(d / "opt.json", "{" + problem + R"(, "optimize": {"tol": 1e-9, "max_iters": 2000}})");
  REQUIRE(run_cli("optimize", d / "opt.json", d / "o") == 0);
  CHECK(fs::exists(d / "o" / "trace.csv"));

  write_text(d / "ver.json",
             "{" + problem + R"(, "controls": {"u": {"csv": "o/u.csv"}, "v": {"csv": "o/v.csv"}}})");
  CHECK(run_cli("verify", d / "ver.json", d / "v1") == 0);
  CHECK(run_cli("verify", d / "ver.json", d / "v2") == 0);
  CHECK(read_text(d / "v1" / "report.json") == read_text(d / "v2" / "report.json"));
  const Json rep = read_json(d / "v1" / "report.json");
  CHECK(rep.contains("verdicts"));
  CHECK(rep["b_stat_min"].get<double>() >= -1e-6);

  write_text(d / "rnd.json", "{" + problem + R"(, "controls": {"u": "3*sin(5*x1) - x2", "v": -2}})");
  CHECK(run_cli("verify", d / "rnd.json", d / "r") == 2);
  CHECK(read_json(d / "r" / "report.json")["b_stat_min"].get<double>() < 0.0);
}

TEST_CASE("in-process run reports solver errors") {
  RunConfig c = parse_config_text(R"({"grid": {"nx": 9, "ny": 9}, "controls": {"u": 30},
                                      "solver": {"newton_max_iter": 1, "newton_tol": 1e-15},
                                      "nonlinearity": {"kind": "smooth"}})");
  c.output_dir = scratch("err");
  const RunOutcome r = run(c);
  CHECK(r.exit_code == kExitSolverError);
  CHECK_FALSE(r.message.empty());
  CHECK(r.report["error"]["kind"] == "NonConvergence");
}
