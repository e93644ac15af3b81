#include "nsoc/objective.hpp"

#include <cmath>

namespace nsoc {

double objective_at(const ProblemSpec& spec, const ControlPair& w, const Field& y) {
  const Field ry = y - spec.y_omega;
  const BoundaryField rg = trace(y) - spec.y_gamma;
  return 0.5 * inner_omega(ry, ry) + 0.5 * spec.alpha * inner_gamma(rg, rg) +
         0.5 * spec.kappa_omega * inner_omega(w.u, w.u) +
         0.5 * spec.kappa_gamma * inner_gamma(w.v, w.v);
}

double objective(const ProblemSpec& spec, const ControlPair& w) {
  return objective_at(spec, w, control_to_state(spec, w));
}

double objective_dir_deriv(const ProblemSpec& spec, const ControlPair& w, const Field& y,
                           const Field& f, const BoundaryField& h) {
  const Field delta = dir_deriv(spec, y, f, h);
  return inner_omega(y - spec.y_omega, delta) +
         spec.alpha * inner_gamma(trace(y) - spec.y_gamma, trace(delta)) +
         spec.kappa_omega * inner_omega(w.u, f) + spec.kappa_gamma * inner_gamma(w.v, h);
}

double objective_dir_deriv(const ProblemSpec& spec, const ControlPair& w, const Field& f,
                           const BoundaryField& h) {
  return objective_dir_deriv(spec, w, control_to_state(spec, w), f, h);
}

ObjectiveDifference objective_difference(const ProblemSpec& spec, const ControlPair& w1,
                                         const Field& y1, const ControlPair& w2, const Field& y2) {
  ObjectiveDifference out;
  out.j1 = objective_at(spec, w1, y1);
  out.j2 = objective_at(spec, w2, y2);
  out.lhs = out.j1 - out.j2;

  const Field dy = y1 - y2;
  const BoundaryField dyg = trace(dy);
  const Field du = w1.u - w2.u;
  const BoundaryField dv = w1.v - w2.v;
  const double a = spec.alpha;
  const double ko = spec.kappa_omega;
  const double kg = spec.kappa_gamma;
  out.rhs = 0.5 * inner_omega(dy, dy) + 0.5 * a * inner_gamma(dyg, dyg) +
            0.5 * ko * inner_omega(du, du) + 0.5 * kg * inner_gamma(dv, dv) +
            inner_omega(y2 - spec.y_omega, dy) + a * inner_gamma(trace(y2) - spec.y_gamma, dyg) +
            ko * inner_omega(w2.u, du) + kg * inner_gamma(w2.v, dv);
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

ObjectiveDifference objective_difference(const ProblemSpec& spec, const ControlPair& w1,
                                         const ControlPair& w2) {
  return objective_difference(spec, w1, control_to_state(spec, w1), w2,
                              control_to_state(spec, w2));
}

Field tracking_adjoint(const ProblemSpec& spec, const Field& a, const Field& y) {
  return solve_linear(spec.robin, a, y - spec.y_omega, spec.alpha * (trace(y) - spec.y_gamma),
                      spec.solver);
}

ReducedGradient reduced_gradient(const ProblemSpec& spec, const ControlPair& w, const Field& y,
                                 double defect_tol) {
  ReducedGradient g;
  g.defect = gateaux_defect_at(spec, y);
  g.gateaux = g.defect <= defect_tol;
  // off the band a_- = d'(y); on it a_- is the left slope, the surrogate at non-Gateaux points
  g.phi = tracking_adjoint(spec, coefficients(spec, y).a_minus, y);
  g.gu = g.phi + spec.kappa_omega * w.u;
  g.gv = trace(g.phi) + spec.kappa_gamma * w.v;
  return g;
}

ReducedGradient reduced_gradient(const ProblemSpec& spec, const ControlPair& w,
                                 double defect_tol) {
  return reduced_gradient(spec, w, control_to_state(spec, w), defect_tol);
}

}  // namespace nsoc
