#include "support.hpp"

#include "nsoc/optimize.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace nsoc;
using namespace nsoc::testing;

TEST_CASE("projection onto the admissible set") {
  ProblemSpec s = default_problem(unit_square(9));
  s.u_b = Field::constant(s.grid, 3.0);
  s.v_b = BoundaryField::constant(s.grid, 1.0);
  finalize(s);
  const ControlPair p = project_admissible(s, ControlPair::constant(s.grid, 5.0, 5.0));
  CHECK(p.u.values.maxCoeff() == 3.0);
  CHECK(p.u.values.minCoeff() == 3.0);
  CHECK(p.v.values.maxCoeff() == 1.0);

  const ControlPair a = ControlPair::constant(s.grid, -1.0, 0.5);
  const ControlPair pa = project_admissible(s, a);
  CHECK(norm(pa - a) == 0.0);

  std::mt19937_64 rng(40);
  const ControlPair r = random_controls(s.grid, rng, 5.0);
  const ControlPair once = project_admissible(s, r);
  CHECK(norm(project_admissible(s, once) - once) == 0.0);
  CHECK(is_admissible(s, once));

  const ProblemSpec free = default_problem(unit_square(9));
  CHECK(norm(project_admissible(free, r) - r) == 0.0);
}

TEST_CASE("unconstrained smooth problem") {
  const Benchmark bm = unconstrained_smooth_benchmark(17);
  OptimizeConfig cfg;
  cfg.b_stat_probes = 10;
  const OptimizeResult r = minimize(bm.spec, cfg);
  CHECK(r.converged);
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.back().pg_norm <= 1e-6);
  // nonincreasing at the precision J is evaluated to
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    const double ulp = 32.0 * std::numeric_limits<double>::epsilon() * r.trace[k - 1].objective;
    CHECK(r.trace[k].objective <= r.trace[k - 1].objective + ulp);
    CHECK(r.trace[k].armijo_decrease >= -ulp);
  }
  REQUIRE(r.b_stat.has_value());
  CHECK(r.b_stat->pass);
}

TEST_CASE("upper bounds become active") {
  ProblemSpec s = default_problem(unit_square(17), Pc1Function::smooth());
  s.y_omega = Field::constant(s.grid, 2.0);
  s.y_gamma = BoundaryField::constant(s.grid, 2.0);
  s.alpha = 1.0;
  s.kappa_omega = 1e-2;
  s.kappa_gamma = 1e-2;
  s.u_b = Field::constant(s.grid, 0.0);
  s.v_b = BoundaryField::constant(s.grid, 0.0);
  finalize(s);
  OptimizeConfig cfg;
  cfg.b_stat_probes = 0;
  const OptimizeResult r = minimize(s, cfg);
  CHECK(r.converged);
  CHECK(is_admissible(s, r.w));
  int active = 0;
  for (int n = 0; n < r.w.u.size(); ++n) active += r.w.u[n] == (*s.u_b)[n];
  CHECK(active > 0);
  const ReducedGradient g = reduced_gradient(s, r.w, r.y, 1e300);
  CHECK(projected_gradient_norm(s, r.w, g) <= cfg.tol);
}

TEST_CASE("a stationary start is a fixed point") {
  const Benchmark bm = bound_case_benchmark(17);
  OptimizeConfig cfg;
  cfg.initial = bm.w_star;
  cfg.b_stat_probes = 0;
  const OptimizeResult r = minimize(bm.spec, cfg);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(norm(r.w - bm.w_star) == 0.0);
  CHECK(r.trace.front().objective == objective(bm.spec, bm.w_star));
}

TEST_CASE("optimizer configuration is validated") {
  const ProblemSpec s = default_problem(unit_square(9));
  OptimizeConfig cfg;
  cfg.tol = 0.0;
  CHECK_THROWS(minimize(s, cfg));
  OptimizeConfig c2;
  c2.backtrack = 1.5;
  CHECK_THROWS(minimize(s, c2));
}

TEST_CASE("optimization is deterministic") {
  const Benchmark bm = unconstrained_smooth_benchmark(9);
  OptimizeConfig cfg;
  cfg.seed = 3;
  const OptimizeResult a = minimize(bm.spec, cfg);
  const OptimizeResult b = minimize(bm.spec, cfg);
  CHECK(norm(a.w - b.w) == 0.0);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.b_stat.has_value());
  CHECK(a.b_stat->min_value == b.b_stat->min_value);
}
