#pragma once

#include "nsoc/grid.hpp"
#include "nsoc/nonsmooth.hpp"
#include "nsoc/pde.hpp"

#include <optional>

namespace nsoc {

/// Distributed control u on the closed domain and boundary control v on the perimeter.
struct ControlPair {
  Field u;
  BoundaryField v;

  static ControlPair zero(const GridPtr& g);
  static ControlPair constant(const GridPtr& g, double cu, double cv);
};

ControlPair operator+(const ControlPair& a, const ControlPair& b);
ControlPair operator-(const ControlPair& a, const ControlPair& b);
ControlPair operator*(double s, const ControlPair& a);
/// <a, b>_Omega + <a, b>_Gamma on both components.
double inner(const ControlPair& a, const ControlPair& b);
double norm(const ControlPair& a);

/**
 * Data of the control problem: tracking targets, Tikhonov weights, Robin
 * coefficient, optional upper bounds, nonlinearity and solver settings.
 * Build through finalize(), which validates and assembles the Robin operator.
 */
struct ProblemSpec {
  GridPtr grid;
  Pc1Function pc1 = Pc1Function::max0();
  Field y_omega;
  BoundaryField y_gamma;
  double alpha = 0.0;
  double kappa_omega = 1.0;
  double kappa_gamma = 1.0;
  BoundaryField b;
  std::optional<Field> u_b;          // nullopt = +infinity
  std::optional<BoundaryField> v_b;  // nullopt = +infinity
  SolverConfig solver;
  std::optional<double> delta_level;  // nullopt = 1e-8 * range(y)

  RobinOperator robin;
};

/// Checks the data assumptions and assembles the Robin operator.
void finalize(ProblemSpec& spec);

/// Problem with all targets zero, b = 1, no bounds; a convenient starting point.
ProblemSpec default_problem(GridPtr grid, Pc1Function pc1 = Pc1Function::max0());

bool is_admissible(const ProblemSpec& spec, const ControlPair& w);
bool bounds_finite(const ProblemSpec& spec);
/// w == (u_b, v_b) nodewise with both bounds finite.
bool at_upper_bounds(const ProblemSpec& spec, const ControlPair& w);

}  // namespace nsoc
