#include "nsoc/run.hpp"

#include "nsoc/benchmarks.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace nsoc {

namespace {

constexpr const char* kVersion = "1.0.0";

Json grid_json(const Grid& g) {
  return Json{{"nx", g.nx()}, {"ny", g.ny()}, {"hx", g.hx()}, {"hy", g.hy()},
              {"rect", {g.rect().x0, g.rect().y0, g.rect().lx, g.rect().ly}}};
}

bool nonincreasing(const std::vector<LimitRow>& rows, int probe, double slack) {
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (r.probe_id != probe) continue;
    if (r.err_h1 > prev * (1.0 + slack) + 1e-14) return false;
    prev = r.err_h1;
  }
  return true;
}

double final_error(const std::vector<LimitRow>& rows, int probe) {
  double last = 0.0;
  for (const auto& r : rows) {
    if (r.probe_id == probe) last = r.err_h1;
  }
  return last;
}

void write_controls(const RunConfig& cfg, const ControlPair& w, const Field& y) {
  const auto& dir = cfg.output_dir;
  write_field_csv(dir / "u.csv", w.u);
  write_boundary_csv(dir / "v.csv", w.v);
  write_field_csv(dir / "y.csv", y);
  if (cfg.vtk) {
    write_text(dir / "u.vtk", field_to_vtk(w.u, "u"));
    write_text(dir / "y.vtk", field_to_vtk(y, "y"));
  }
}

int task_solve_state(const RunConfig& cfg, Json& rep) {
  const ProblemSpec& s = cfg.problem;
  const StateSolution sol = solve_state(s.robin, s.pc1, cfg.controls.u, cfg.controls.v, s.solver);
  rep["solve"] = to_json(sol.report);
  rep["state"] = field_summary(sol.y, true);
  rep["objective"] = objective_at(s, cfg.controls, sol.y);
  rep["gateaux_defect"] = gateaux_defect_at(s, sol.y);
  write_field_csv(cfg.output_dir / "y.csv", sol.y);
  if (cfg.vtk) write_text(cfg.output_dir / "y.vtk", field_to_vtk(sol.y, "y"));
  rep["verdicts"] = Json{{"converged", sol.report.converged}};
  return sol.report.converged ? kExitPass : kExitVerdictFail;
}

int task_optimize(const RunConfig& cfg, Json& rep) {
  OptimizeConfig oc = cfg.optimize;
  oc.seed = cfg.seed;
  OptimizeResult res;
  try {
    res = minimize(cfg.problem, oc);
  } catch (const LineSearchFailure& e) {
    write_text(cfg.output_dir / "trace.csv", trace_csv(e.partial().trace));
    throw;
  }
  write_controls(cfg, res.w, res.y);
  write_text(cfg.output_dir / "trace.csv", trace_csv(res.trace));
  rep["converged"] = res.converged;
  rep["iterations"] = res.iterations;
  rep["objective"] = res.trace.back().objective;
  rep["pg_norm"] = res.trace.back().pg_norm;
  rep["trace"] = to_json(res.trace);
  rep["b_stat"] = res.b_stat ? to_json(*res.b_stat) : Json(nullptr);
  const bool b_ok = !res.b_stat || res.b_stat->pass;
  rep["verdicts"] = Json{{"converged", res.converged}, {"b_stationary", b_ok}};
  return res.converged && b_ok ? kExitPass : kExitVerdictFail;
}

int task_verify(const RunConfig& cfg, Json& rep) {
  const StationarityReport sr =
      verify_stationarity(cfg.problem, cfg.controls, cfg.verify_probes, cfg.seed);
  rep["b_stat_min"] = sr.b_stat.min_value;
  const Json body = to_json(sr);
  for (const auto& [k, v] : body.items()) rep[k] = v;
  return sr.all_pass() ? kExitPass : kExitVerdictFail;
}

std::vector<Side> sides(const LimitSettings& l) {
  std::vector<Side> out;
  if (l.minus) out.push_back(Side::Minus);
  if (l.plus) out.push_back(Side::Plus);
  return out;
}

int task_bouligand(const RunConfig& cfg, Json& rep) {
  const auto probes = random_probes(cfg.problem.grid, cfg.limit.probes, cfg.seed);
  bool ok = true;
  Json tables = Json::object();
  for (Side side : sides(cfg.limit)) {
    if (side == Side::Plus && at_upper_bounds(cfg.problem, cfg.controls)) {
      tables[to_string(side)] = Json{{"skipped", "controls sit on the upper bounds"}};
      continue;
    }
    const auto rows = bouligand_limit_test(cfg.problem, cfg.controls, cfg.limit.limit, side, probes);
    write_text(cfg.output_dir / (std::string("limit_") + to_string(side) + ".csv"), limit_table_csv(rows));
    Json per_probe = Json::array();
    for (int p = 0; p < cfg.limit.probes; ++p) {
      const bool mono = nonincreasing(rows, p, 1e-6);
      ok = ok && mono;
      per_probe.push_back({{"probe_id", p}, {"nonincreasing", mono}, {"final_err_h1", final_error(rows, p)}});
    }
    tables[to_string(side)] = Json{{"rows", to_json(rows)}, {"probes", per_probe}};
  }
  rep["sigma"] = cfg.limit.limit.sigma;
  rep["tables"] = tables;
  rep["verdicts"] = Json{{"nonincreasing", ok}};
  return ok ? kExitPass : kExitVerdictFail;
}

int task_wset(const RunConfig& cfg, Json& rep) {
  const auto probes = random_probes(cfg.problem.grid, 1, cfg.seed);
  bool ok = true;
  Json tables = Json::object();
  for (Side side : sides(cfg.limit)) {
    if (side == Side::Plus && at_upper_bounds(cfg.problem, cfg.controls)) {
      tables[to_string(side)] = Json{{"skipped", "controls sit on the upper bounds"}};
      continue;
    }
    const WsetResult res =
        wset_limit_test(cfg.problem, cfg.controls, cfg.limit.limit, side, probes[0].f, probes[0].h);
    write_text(cfg.output_dir / (std::string("wset_") + to_string(side) + ".csv"), limit_table_csv(res.rows));
    write_field_csv(cfg.output_dir / (std::string("e_formula_") + to_string(side) + ".csv"), res.e_formula);
    const double first = res.rows.empty() ? 0.0 : res.rows.front().err_h1;
    const double last = res.rows.empty() ? 0.0 : res.rows.back().err_h1;
    const bool decreasing = last <= first;
    ok = ok && decreasing;
    tables[to_string(side)] = Json{{"rows", to_json(res.rows)},
                                   {"e_formula_max", norm_max(res.e_formula)},
                                   {"final_err_h1", last},
                                   {"decreasing", decreasing}};
  }
  rep["sigma"] = cfg.limit.limit.sigma;
  rep["tables"] = tables;
  rep["verdicts"] = Json{{"decreasing", ok}};
  return ok ? kExitPass : kExitVerdictFail;
}

int task_convergence(const RunConfig& cfg, Json& rep) {
  const ProblemSpec& base = cfg.problem;
  const double b0 = base.b.values[0];
  if ((base.b.values.array() != b0).any()) {
    throw std::invalid_argument("convergence-study needs a constant Robin coefficient b");
  }
  Json rows = Json::array();
  std::vector<double> hs, errs;
  for (int n : cfg.study_sizes) {
    ProblemSpec s;
    s.grid = build_grid(n, n, base.grid->rect());
    s.pc1 = base.pc1;
    s.b = BoundaryField::constant(s.grid, b0);
    s.solver = base.solver;
    finalize(s);
    const ManufacturedCase mc = manufactured_sine(s);
    const StateSolution sol = solve_state(s.robin, s.pc1, mc.w.u, mc.w.v, s.solver);
    const double err = norm_omega(sol.y - mc.y_exact);
    hs.push_back(std::max(s.grid->hx(), s.grid->hy()));
    errs.push_back(err);
    rows.push_back({{"n", n}, {"h", hs.back()}, {"l2_error", err}, {"max_error", norm_max(sol.y - mc.y_exact)}});
  }
  Json orders = Json::array();
  double min_order = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < errs.size(); ++k) {
    const double p = std::log(errs[k - 1] / errs[k]) / std::log(hs[k - 1] / hs[k]);
    orders.push_back(p);
    min_order = std::min(min_order, p);
  }
  rep["rows"] = rows;
  rep["orders"] = orders;
  rep["min_order"] = min_order;
  const bool ok = min_order >= 1.8;
  rep["verdicts"] = Json{{"order_at_least_1_8", ok}};
  return ok ? kExitPass : kExitVerdictFail;
}

}  // namespace

std::vector<Probe> random_probes(const GridPtr& grid, int count, std::uint64_t seed) {
  using std::numbers::pi;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<Probe> out;
  for (int p = 0; p < count; ++p) {
    const double a0 = coef(rng), a1 = coef(rng), a2 = coef(rng), a3 = coef(rng);
    const double k1 = 1.0 + std::floor(3.0 * std::abs(coef(rng)));
    const double k2 = 1.0 + std::floor(3.0 * std::abs(coef(rng)));
    auto fn = [=](double x, double y) {
      return a0 + a1 * std::sin(k1 * pi * x) * std::cos(k2 * pi * y) + a2 * x - a3 * y * y;
    };
    out.push_back(Probe{Field::sample(grid, fn), BoundaryField::sample(grid, fn)});
  }
  return out;
}

RunOutcome run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.output_dir);
  RunOutcome out;
  Json& rep = out.report;
  rep["task"] = to_string(cfg.task);
  rep["seed"] = cfg.seed;
  rep["grid"] = grid_json(*cfg.problem.grid);
  rep["nonlinearity"] = cfg.problem.pc1.kind();
  try {
    switch (cfg.task) {
      case Task::SolveState: out.exit_code = task_solve_state(cfg, rep); break;
      case Task::Optimize: out.exit_code = task_optimize(cfg, rep); break;
      case Task::Verify: out.exit_code = task_verify(cfg, rep); break;
      case Task::BouligandLimit: out.exit_code = task_bouligand(cfg, rep); break;
      case Task::WsetLimit: out.exit_code = task_wset(cfg, rep); break;
      case Task::ConvergenceStudy: out.exit_code = task_convergence(cfg, rep); break;
    }
  } catch (const NonConvergence& e) {
    out.exit_code = kExitSolverError;
    out.message = e.what();
    rep["error"] = Json{{"kind", "NonConvergence"}, {"message", e.what()}, {"solve", to_json(e.report())}};
  } catch (const LineSearchFailure& e) {
    out.exit_code = kExitSolverError;
    out.message = e.what();
    rep["error"] = Json{{"kind", "LineSearchFailure"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    out.exit_code = kExitSolverError;
    out.message = e.what();
    rep["error"] = Json{{"kind", "error"}, {"message", e.what()}};
  }
  rep["exit_code"] = out.exit_code;
  write_text(cfg.output_dir / "report.json", rep.dump(2) + "\n");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Json manifest{{"version", kVersion},
                {"task", to_string(cfg.task)},
                {"seed", cfg.seed},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                              "." + std::to_string(EIGEN_MINOR_VERSION)},
                {"wall_time_s", wall},
                {"config", cfg.echo}};
  write_text(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");
  return out;
}

}  // namespace nsoc
