#pragma once

#include "nsoc/operator.hpp"
#include "nsoc/problem.hpp"

namespace nsoc {

/// J(w) = 1/2|y - y_Omega|^2 + alpha/2 |y - y_Gamma|^2_Gamma + kappa_Omega/2 |u|^2 + kappa_Gamma/2 |v|^2.
double objective(const ProblemSpec& spec, const ControlPair& w);
double objective_at(const ProblemSpec& spec, const ControlPair& w, const Field& y);

/// J'(w; f, h) through the one-sided state derivative at y = S(w).
double objective_dir_deriv(const ProblemSpec& spec, const ControlPair& w, const Field& y,
                           const Field& f, const BoundaryField& h);
double objective_dir_deriv(const ProblemSpec& spec, const ControlPair& w, const Field& f,
                           const BoundaryField& h);

/// Both sides of the exact expansion of J(w1) - J(w2) around w2.
struct ObjectiveDifference {
  double lhs = 0.0;  // J(w1) - J(w2)
  double rhs = 0.0;
  double gap = 0.0;  // |lhs - rhs|
  double j1 = 0.0;
  double j2 = 0.0;
};

ObjectiveDifference objective_difference(const ProblemSpec& spec, const ControlPair& w1,
                                         const ControlPair& w2);
ObjectiveDifference objective_difference(const ProblemSpec& spec, const ControlPair& w1,
                                         const Field& y1, const ControlPair& w2, const Field& y2);

struct ReducedGradient {
  Field gu;
  BoundaryField gv;
  Field phi;
  double defect = 0.0;
  /// false when the state touches the kink band; gu, gv then use the a_- surrogate
  bool gateaux = true;
};

ReducedGradient reduced_gradient(const ProblemSpec& spec, const ControlPair& w, const Field& y,
                                 double defect_tol = 0.0);
ReducedGradient reduced_gradient(const ProblemSpec& spec, const ControlPair& w,
                                 double defect_tol = 0.0);

/// Adjoint of the linearization with coefficient a and the tracking residuals as data.
Field tracking_adjoint(const ProblemSpec& spec, const Field& a, const Field& y);

}  // namespace nsoc
