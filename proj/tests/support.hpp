#pragma once

#include "nsoc/benchmarks.hpp"
#include "nsoc/objective.hpp"
#include "nsoc/operator.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <numbers>
#include <random>

namespace nsoc::testing {

/// Trigonometric field with random amplitudes and frequencies in [-amp, amp] (roughly).
inline Field random_field(const GridPtr& g, std::mt19937_64& rng, double amp = 1.0) {
  using std::numbers::pi;
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  const double a0 = c(rng), a1 = c(rng), a2 = c(rng), p1 = c(rng), p2 = c(rng);
  const double k1 = 1.0 + std::floor(2.99 * std::abs(c(rng)));
  const double k2 = 1.0 + std::floor(2.99 * std::abs(c(rng)));
  return Field::sample(g, [=](double x, double y) {
    return amp * (0.5 * a0 + 0.5 * a1 * std::sin(k1 * pi * x + p1) * std::cos(k2 * pi * y + p2) +
                  0.3 * a2 * x * y);
  });
}

inline BoundaryField random_boundary(const GridPtr& g, std::mt19937_64& rng, double amp = 1.0) {
  return trace(random_field(g, rng, amp));
}

inline Field random_nonneg_field(const GridPtr& g, std::mt19937_64& rng, double amp = 1.0) {
  Field f = random_field(g, rng, amp);
  f.values = f.values.cwiseAbs();
  return f;
}

inline BoundaryField random_nonneg_boundary(const GridPtr& g, std::mt19937_64& rng,
                                            double amp = 1.0) {
  BoundaryField h = random_boundary(g, rng, amp);
  h.values = h.values.cwiseAbs();
  return h;
}

inline ControlPair random_controls(const GridPtr& g, std::mt19937_64& rng, double amp = 2.0) {
  return ControlPair{random_field(g, rng, amp), random_boundary(g, rng, amp)};
}

/// Kinked nonlinearity with genuinely curved branches.
inline Pc1Function curved_kink() {
  return Pc1Function(0.0, CubicBranch{0.0, 0.5, 0.0, 0.3}, CubicBranch{0.0, 2.0, 0.5, 0.5});
}

inline GridPtr unit_square(int n) { return build_grid(n, n, Rect{0.0, 0.0, 1.0, 1.0}); }

/// Problem with random targets on the unit square.
inline ProblemSpec random_problem(int n, Pc1Function pc1, std::mt19937_64& rng) {
  ProblemSpec s;
  s.grid = unit_square(n);
  s.pc1 = std::move(pc1);
  s.y_omega = random_field(s.grid, rng);
  s.y_gamma = random_boundary(s.grid, rng);
  s.alpha = 0.7;
  s.kappa_omega = 0.05;
  s.kappa_gamma = 0.02;
  finalize(s);
  return s;
}

/// Controls whose state equals t_bar for x1 <= 3/8 and rises quadratically beyond.
struct KinkCase {
  ProblemSpec spec;
  ControlPair w;
};

inline KinkCase quadratic_plateau(int n, Pc1Function pc1, double scale = 100.0) {
  KinkCase c{default_problem(unit_square(n), std::move(pc1)), {}};
  c.w = synthesize_controls(c.spec, plateau_state(c.spec.grid, c.spec.pc1.t_bar(), 0.375, scale, 2));
  return c;
}

/// Sparse LU solve of (A + M diag(a)) z = M f + W h; independent of the CG path.
inline Field direct_linear(const ProblemSpec& s, const Field& a, const Field& f,
                           const BoundaryField& h) {
  const Grid& g = *s.grid;
  SparseMatrix K = s.robin.matrix;
  for (int i = 0; i < g.num_nodes(); ++i) K.coeffRef(i, i) += g.node_weights()[i] * a[i];
  K.makeCompressed();
  Vector rhs = g.node_weights().cwiseProduct(f.values);
  for (int k = 0; k < g.num_boundary(); ++k) {
    rhs[g.perimeter_node(k)] += g.boundary_weights()[k] * h[k];
  }
  Eigen::SparseLU<SparseMatrix> lu(K);
  return Field(s.grid, lu.solve(rhs));
}

}  // namespace nsoc::testing
