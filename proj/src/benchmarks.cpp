#include "nsoc/benchmarks.hpp"

#include "nsoc/objective.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace nsoc {

ControlPair synthesize_controls(const ProblemSpec& spec, const Field& y, BoundarySplit split) {
  const Grid& g = *spec.grid;
  const Vector Ay = spec.robin.matrix * y.values;
  const Vector& m = g.node_weights();
  ControlPair w = ControlPair::zero(spec.grid);
  for (int n = 0; n < g.num_nodes(); ++n) w.u[n] = Ay[n] / m[n] + pc1_eval(spec.pc1, y[n]);
  for (int k = 0; k < g.num_boundary(); ++k) {
    const int n = g.perimeter_node(k);
    const double gam = g.boundary_weights()[k];
    const double row = Ay[n] + m[n] * pc1_eval(spec.pc1, y[n]);
    if (split == BoundarySplit::StateOnly) {
      w.u[n] = pc1_eval(spec.pc1, y[n]);
      w.v[k] = Ay[n] / gam;
    } else {
      w.u[n] = row / (m[n] + gam * spec.kappa_omega / spec.kappa_gamma);
      w.v[k] = spec.kappa_omega * w.u[n] / spec.kappa_gamma;
    }
  }
  return w;
}

ManufacturedCase manufactured_sine(const ProblemSpec& spec) {
  using std::numbers::pi;
  const GridPtr& g = spec.grid;
  const Rect& r = g->rect();
  const double kx = pi / r.lx;
  const double ky = pi / r.ly;
  auto ystar = [&](double x, double y) { return std::sin(kx * (x - r.x0)) * std::sin(ky * (y - r.y0)); };
  ManufacturedCase mc;
  mc.y_exact = Field::sample(g, ystar);
  mc.w.u = Field::sample(g, [&](double x, double y) {
    const double s = ystar(x, y);
    return (kx * kx + ky * ky) * s + pc1_eval(spec.pc1, s);
  });
  Vector v(g->num_boundary());
  for (int k = 0; k < g->num_boundary(); ++k) {
    const int n = g->perimeter_node(k);
    const double x = g->x(n);
    const double y = g->y(n);
    const double gx = kx * std::cos(kx * (x - r.x0)) * std::sin(ky * (y - r.y0));
    const double gy = ky * std::sin(kx * (x - r.x0)) * std::cos(ky * (y - r.y0));
    const auto normals = g->outward_normals(k);
    double flux = 0.0;
    for (const auto& nu : normals) flux += nu[0] * gx + nu[1] * gy;
    flux /= static_cast<double>(normals.size());
    v[k] = flux + spec.b[k] * ystar(x, y);
  }
  mc.w.v = BoundaryField(g, std::move(v));
  return mc;
}

Field plateau_state(const GridPtr& grid, double t_bar, double x0, double scale, int power) {
  using std::numbers::pi;
  return Field::sample(grid, [&](double x, double y) {
    const double s = std::max(0.0, x - x0);
    return t_bar + scale * std::pow(s, power) * (1.0 + 0.5 * std::sin(pi * y));
  });
}

Field bump_state(const GridPtr& grid, double t_bar, double cx, double cy, double radius,
                 double height, int power) {
  return Field::sample(grid, [&](double x, double y) {
    const double q = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (radius * radius);
    return t_bar + height * std::pow(std::max(0.0, 1.0 - q), power);
  });
}

ControlPair random_kink_touching(const ProblemSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double angle = 2.0 * std::numbers::pi * unit(rng);
  const double nx = std::cos(angle);
  const double ny = std::sin(angle);
  const Rect& r = spec.grid->rect();
  const double cx = r.x0 + r.lx * (0.35 + 0.3 * unit(rng));
  const double cy = r.y0 + r.ly * (0.35 + 0.3 * unit(rng));
  const double scale = 2.0 + 4.0 * unit(rng);
  const double wave = 0.5 * unit(rng);
  const double tb = spec.pc1.t_bar();
  const Field y = Field::sample(spec.grid, [&](double x, double y) {
    const double s = std::max(0.0, nx * (x - cx) + ny * (y - cy));
    return tb + scale * s * s * (1.0 + wave * std::cos(3.0 * x + 2.0 * y));
  });
  return synthesize_controls(spec, y);
}

namespace {

GridPtr unit_grid(int n) { return build_grid(n, n, Rect{0.0, 0.0, 1.0, 1.0}); }

}  // namespace

Benchmark unconstrained_smooth_benchmark(int n) {
  using std::numbers::pi;
  Benchmark bm;
  ProblemSpec& s = bm.spec;
  s.grid = unit_grid(n);
  s.pc1 = Pc1Function::smooth();
  s.y_omega = Field::sample(s.grid, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  s.y_gamma = BoundaryField::constant(s.grid, 0.0);
  s.alpha = 1.0;
  s.kappa_omega = 1e-2;
  s.kappa_gamma = 1e-2;
  finalize(s);
  return bm;
}

namespace {

ProblemSpec bound_active_spec(int n, Pc1Function pc1) {
  using std::numbers::pi;
  ProblemSpec s;
  s.grid = unit_grid(n);
  s.pc1 = std::move(pc1);
  s.y_omega = Field::sample(s.grid, [](double x, double y) {
    return 1.0 + 3.0 * std::sin(pi * x) * std::sin(pi * y);
  });
  s.y_gamma = BoundaryField::constant(s.grid, 1.0);
  s.alpha = 1.0;
  s.kappa_omega = 1e-2;
  s.kappa_gamma = 1e-2;
  s.u_b = Field::constant(s.grid, 6.0);
  s.v_b = BoundaryField::constant(s.grid, 0.35);
  finalize(s);
  return s;
}

}  // namespace

Benchmark bound_active_benchmark(int n) {
  Benchmark bm;
  bm.spec = bound_active_spec(n, Pc1Function::max0());
  return bm;
}

Benchmark bound_active_smooth_benchmark(int n) {
  Benchmark bm;
  bm.spec = bound_active_spec(n, Pc1Function::smooth());
  return bm;
}

Benchmark kink_active_benchmark(int n) {
  Benchmark bm;
  ProblemSpec& s = bm.spec;
  s.grid = unit_grid(n);
  s.pc1 = Pc1Function::max0();
  s.alpha = 1.0;
  s.kappa_omega = 1e-2;
  s.kappa_gamma = 1e-2;
  s.delta_level = 1e-10;
  s.solver.newton_tol = 1e-14;
  s.solver.linear_tol = 1e-14;
  finalize(s);

  const Grid& g = *s.grid;
  const Field ybar = bump_state(s.grid, s.pc1.t_bar(), 0.5, 0.5, 0.4, -1.0, 7);
  bm.w_star = synthesize_controls(s, ybar, BoundarySplit::Balanced);
  bm.has_w_star = true;

  // adjoint p = -kappa_Omega u makes the unconstrained gradient vanish; pick the targets so that
  // (A + M a_-) p = M (ybar - y_Omega) + alpha W (ybar - y_Gamma) with equal residuals on the perimeter
  const Field p = -s.kappa_omega * bm.w_star.u;
  const CoefficientPair coef = coefficients(s, ybar);
  const Vector Kp = s.robin.matrix * p.values +
                    g.node_weights().cwiseProduct(coef.a_minus.values.cwiseProduct(p.values));
  Vector resid(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) resid[i] = Kp[i] / g.node_weights()[i];
  Vector yg(g.num_boundary());
  for (int k = 0; k < g.num_boundary(); ++k) {
    const int i = g.perimeter_node(k);
    resid[i] = Kp[i] / (g.node_weights()[i] + s.alpha * g.boundary_weights()[k]);
    yg[k] = ybar[i] - resid[i];
  }
  s.y_omega = Field(s.grid, ybar.values - resid);
  s.y_gamma = BoundaryField(s.grid, std::move(yg));
  finalize(s);
  return bm;
}

Benchmark bound_case_benchmark(int n) {
  Benchmark bm;
  ProblemSpec& s = bm.spec;
  s.grid = unit_grid(n);
  s.pc1 = Pc1Function::max0();
  s.y_omega = Field::constant(s.grid, 5.0);
  s.y_gamma = BoundaryField::constant(s.grid, 5.0);
  s.alpha = 1.0;
  s.kappa_omega = 0.1;
  s.kappa_gamma = 0.1;
  s.u_b = Field::constant(s.grid, 0.5);
  s.v_b = BoundaryField::constant(s.grid, 0.5);
  finalize(s);
  bm.w_star = ControlPair{*s.u_b, *s.v_b};
  bm.has_w_star = true;
  return bm;
}

}  // namespace nsoc
