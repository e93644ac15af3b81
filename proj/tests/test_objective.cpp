#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace nsoc;
using namespace nsoc::testing;

namespace {

double quadrature_oracle(const ProblemSpec& s, const ControlPair& w, const Field& y) {
  const Grid& g = *s.grid;
  double j = 0.0;
  for (int n = 0; n < g.num_nodes(); ++n) {
    const double r = y[n] - s.y_omega[n];
    j += 0.5 * g.node_weights()[n] * (r * r + s.kappa_omega * w.u[n] * w.u[n]);
  }
  for (int k = 0; k < g.num_boundary(); ++k) {
    const double r = y[g.perimeter_node(k)] - s.y_gamma[k];
    j += 0.5 * g.boundary_weights()[k] * (s.alpha * r * r + s.kappa_gamma * w.v[k] * w.v[k]);
  }
  return j;
}

}  // namespace

TEST_CASE("objective values") {
  ProblemSpec s = default_problem(unit_square(17));
  const Field y0 = control_to_state(s, ControlPair::zero(s.grid));
  s.y_omega = y0;
  s.y_gamma = trace(y0);
  s.alpha = 1.0;
  finalize(s);
  CHECK(objective(s, ControlPair::zero(s.grid)) == 0.0);

  ProblemSpec t = default_problem(unit_square(17));
  t.alpha = 0.0;
  t.kappa_omega = 2.0;
  t.kappa_gamma = 2.0;
  const ControlPair w = ControlPair::constant(t.grid, 1.0, 0.0);
  t.y_omega = control_to_state(t, w);
  finalize(t);
  CHECK(objective(t, w) == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(30);
  for (int c = 0; c < 3; ++c) {
    const ProblemSpec r = random_problem(17, curved_kink(), rng);
    const ControlPair wr = random_controls(r.grid, rng);
    const Field y = control_to_state(r, wr);
    const double j = objective(r, wr);
    CHECK(std::abs(j - quadrature_oracle(r, wr, y)) <= 1e-12 * (1.0 + j));
    const double coercive = 0.5 * std::min(r.kappa_omega, r.kappa_gamma) * norm(wr) * norm(wr);
    CHECK(j >= coercive);
  }
}

TEST_CASE("directional derivative of the objective") {
  std::mt19937_64 rng(31);
  const KinkCase kc = quadratic_plateau(17, curved_kink());
  ProblemSpec s = kc.spec;
  s.y_omega = random_field(s.grid, rng);
  s.y_gamma = random_boundary(s.grid, rng);
  s.alpha = 0.5;
  s.kappa_omega = 0.1;
  s.kappa_gamma = 0.2;
  s.solver.newton_tol = 1e-13;
  finalize(s);
  const Field zero = Field::constant(s.grid, 0.0);
  const BoundaryField bzero = BoundaryField::constant(s.grid, 0.0);
  CHECK(objective_dir_deriv(s, kc.w, zero, bzero) == 0.0);

  for (int c = 0; c < 3; ++c) {
    const Field f = random_field(s.grid, rng);
    const BoundaryField h = random_boundary(s.grid, rng);
    const double jd = objective_dir_deriv(s, kc.w, f, h);
    CHECK(objective_dir_deriv(s, kc.w, 2.0 * f, 2.0 * h) == doctest::Approx(2.0 * jd).epsilon(1e-10));
    const double j0 = objective(s, kc.w);
    double err = 0.0;
    for (double t : {1e-2, 1e-3, 1e-4}) {
      err = std::abs((objective(s, {kc.w.u + t * f, kc.w.v + t * h}) - j0) / t - jd);
    }
    CHECK(err <= 1e-3 * (1.0 + std::abs(jd)));
  }
}

TEST_CASE("objective difference identity") {
  std::mt19937_64 rng(32);
  const ProblemSpec s = random_problem(17, curved_kink(), rng);
  const ControlPair w = random_controls(s.grid, rng);
  const ObjectiveDifference same = objective_difference(s, w, w);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);
  for (double scale : {1.0, 1e-4}) {
    const ControlPair w2 = w + scale * random_controls(s.grid, rng);
    const ObjectiveDifference d = objective_difference(s, w, w2);
    CHECK(d.gap <= 1e-11 * (1.0 + std::abs(d.j1) + std::abs(d.j2)));
    CHECK(d.lhs == doctest::Approx(d.j1 - d.j2));
  }
}

TEST_CASE("reduced gradient") {
  std::mt19937_64 rng(33);
  const ProblemSpec s = random_problem(17, Pc1Function::smooth(), rng);
  const ControlPair w = random_controls(s.grid, rng);
  const ReducedGradient g = reduced_gradient(s, w);
  CHECK(g.gateaux);
  for (int c = 0; c < 5; ++c) {
    const Field f = random_field(s.grid, rng);
    const BoundaryField h = random_boundary(s.grid, rng);
    const double jd = objective_dir_deriv(s, w, f, h);
    const double pair = inner_omega(g.gu, f) + inner_gamma(g.gv, h);
    CHECK(std::abs(pair - jd) <= 1e-9 * (1.0 + std::abs(jd)));
  }

  ProblemSpec k = s;
  k.kappa_omega *= 2.0;
  finalize(k);
  const ReducedGradient g2 = reduced_gradient(k, w);
  CHECK(norm_max((g2.gu - g.gu) - s.kappa_omega * w.u) <= 1e-14 * (1.0 + norm_max(g.gu)));

  ProblemSpec z = default_problem(unit_square(17), curved_kink());
  const Field y0 = control_to_state(z, ControlPair::zero(z.grid));
  z.y_omega = y0;
  z.y_gamma = trace(y0);
  z.alpha = 1.0;
  finalize(z);
  const ReducedGradient g0 = reduced_gradient(z, ControlPair::zero(z.grid));
  CHECK(norm_max(g0.gu) == 0.0);
  CHECK(g0.gv.values.cwiseAbs().maxCoeff() == 0.0);

  const KinkCase kc = quadratic_plateau(17, curved_kink());
  CHECK_FALSE(reduced_gradient(kc.spec, kc.w).gateaux);
}
