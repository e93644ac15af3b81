#pragma once

#include "nsoc/problem.hpp"

#include <vector>

namespace nsoc {

enum class Side { Minus, Plus };

const char* to_string(Side s);

/// One-sided slope fields a_-, a_+ of the state and the kink band they differ on.
struct CoefficientPair {
  Field a_minus;
  Field a_plus;
  std::vector<bool> kink_mask;
};

struct BouligandLimitConfig {
  std::vector<double> epsilons = default_epsilons();
  double sigma = 0.0;

  static std::vector<double> default_epsilons();
  /// rho_k = eps_k / sigma for sigma > 0, sqrt(eps_k) otherwise.
  double rho(double eps) const;
  void validate() const;
};

/// S(u, v).
Field control_to_state(const ProblemSpec& spec, const ControlPair& w);
StateSolution control_to_state_report(const ProblemSpec& spec, const ControlPair& w);

/// Band half-width used for algebraic kink membership at state y.
double kink_delta(const ProblemSpec& spec, const Field& y);

CoefficientPair coefficients(const ProblemSpec& spec, const Field& y, double delta_level);
CoefficientPair coefficients(const ProblemSpec& spec, const Field& y);

/// S'(w; f, h) at the converged state y = S(w).
Field dir_deriv(const ProblemSpec& spec, const Field& y, const Field& f, const BoundaryField& h);

Field g_minus(const ProblemSpec& spec, const Field& y, const Field& f, const BoundaryField& h);
Field g_plus(const ProblemSpec& spec, const Field& y, const Field& f, const BoundaryField& h);
Field g_side(const ProblemSpec& spec, Side side, const Field& y, const Field& f,
             const BoundaryField& h);

struct AdjointPair {
  Field zeta;
  BoundaryField zeta_trace;
};

/// G^* phi for the linearization with coefficient a: zeta and its trace.
AdjointPair g_adjoint(const ProblemSpec& spec, const Field& a, const Field& phi);

/// Feasible perturbation of w towards -1 (minus) or towards the upper bound (plus).
ControlPair perturb_controls(const ProblemSpec& spec, const ControlPair& w, double eps, Side side);

/// The nonnegative directions tilde u_-, tilde v_- (ones) or tilde u_+, tilde v_+.
ControlPair variational_direction(const ProblemSpec& spec, const ControlPair& w, Side side);

/// |d1'(t_bar) - d2'(t_bar)| * measure of the kink band of S(w).
double gateaux_defect(const ProblemSpec& spec, const ControlPair& w);
double gateaux_defect_at(const ProblemSpec& spec, const Field& y);

struct Probe {
  Field f;
  BoundaryField h;
};

struct LimitRow {
  double eps = 0.0;
  double rho = 0.0;
  int probe_id = 0;
  double err_h1 = 0.0;
  double err_max = 0.0;
  bool degenerate = false;
};

/// ||S'(w_k)(f,h) - G_side(w)(f,h)|| along the perturbed sequence w_k.
std::vector<LimitRow> bouligand_limit_test(const ProblemSpec& spec, const ControlPair& w,
                                           const BouligandLimitConfig& cfg, Side side,
                                           const std::vector<Probe>& probes);

struct WsetResult {
  Field e_numeric;  // eta_k / rho_k at the last eps
  Field e_formula;
  std::vector<LimitRow> rows;
};

/**
 * Compares the difference quotients eta_k / rho_k of the perturbed sequence
 * with the closed form S'(w; g) - G_side(w; g), g = (f, h) -/+ sigma * tilde(u, v).
 */
WsetResult wset_limit_test(const ProblemSpec& spec, const ControlPair& w,
                           const BouligandLimitConfig& cfg, Side side, const Field& f,
                           const BoundaryField& h);

/// e_formula alone (no sequence).
Field wset_formula(const ProblemSpec& spec, const ControlPair& w, const Field& y, double sigma,
                   Side side, const Field& f, const BoundaryField& h);

}  // namespace nsoc
