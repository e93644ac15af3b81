#include "nsoc/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsoc {

ControlPair ControlPair::zero(const GridPtr& g) { return constant(g, 0.0, 0.0); }

ControlPair ControlPair::constant(const GridPtr& g, double cu, double cv) {
  return {Field::constant(g, cu), BoundaryField::constant(g, cv)};
}

ControlPair operator+(const ControlPair& a, const ControlPair& b) { return {a.u + b.u, a.v + b.v}; }
ControlPair operator-(const ControlPair& a, const ControlPair& b) { return {a.u - b.u, a.v - b.v}; }
ControlPair operator*(double s, const ControlPair& a) { return {s * a.u, s * a.v}; }

double inner(const ControlPair& a, const ControlPair& b) {
  return inner_omega(a.u, b.u) + inner_gamma(a.v, b.v);
}

double norm(const ControlPair& a) { return std::sqrt(inner(a, a)); }

void finalize(ProblemSpec& spec) {
  if (!spec.grid) throw std::invalid_argument("problem has no grid");
  const Grid& g = *spec.grid;
  if (!(spec.alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(spec.kappa_omega > 0.0)) throw std::invalid_argument("kappa_omega must be > 0");
  if (!(spec.kappa_gamma > 0.0)) throw std::invalid_argument("kappa_gamma must be > 0");
  if (!spec.y_omega.grid) spec.y_omega = Field::constant(spec.grid, 0.0);
  if (!spec.y_gamma.grid) spec.y_gamma = BoundaryField::constant(spec.grid, 0.0);
  if (!spec.b.grid) spec.b = BoundaryField::constant(spec.grid, 1.0);
  require_same_grid(g, *spec.y_omega.grid);
  require_same_grid(g, *spec.y_gamma.grid);
  require_same_grid(g, *spec.b.grid);
  if (spec.u_b) require_same_grid(g, *spec.u_b->grid);
  if (spec.v_b) require_same_grid(g, *spec.v_b->grid);
  if (spec.delta_level && !(*spec.delta_level >= 0.0)) {
    throw std::invalid_argument("delta_level must be >= 0");
  }
  spec.solver.validate();
  spec.robin = assemble_robin(spec.grid, spec.b);  // rejects b <= 0
}

ProblemSpec default_problem(GridPtr grid, Pc1Function pc1) {
  ProblemSpec spec;
  spec.grid = std::move(grid);
  spec.pc1 = std::move(pc1);
  finalize(spec);
  return spec;
}

bool is_admissible(const ProblemSpec& spec, const ControlPair& w) {
  if (spec.u_b && (w.u.values.array() > spec.u_b->values.array()).any()) return false;
  if (spec.v_b && (w.v.values.array() > spec.v_b->values.array()).any()) return false;
  return true;
}

bool bounds_finite(const ProblemSpec& spec) { return spec.u_b.has_value() && spec.v_b.has_value(); }

bool at_upper_bounds(const ProblemSpec& spec, const ControlPair& w) {
  return bounds_finite(spec) && w.u.values == spec.u_b->values && w.v.values == spec.v_b->values;
}

}  // namespace nsoc
