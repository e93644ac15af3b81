#include "nsoc/operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsoc {

const char* to_string(Side s) { return s == Side::Minus ? "minus" : "plus"; }

std::vector<double> BouligandLimitConfig::default_epsilons() {
  std::vector<double> eps;
  for (int k = 3; k <= 10; ++k) eps.push_back(std::ldexp(1.0, -k));
  return eps;
}

double BouligandLimitConfig::rho(double eps) const {
  return sigma > 0.0 ? eps / sigma : std::sqrt(eps);
}

void BouligandLimitConfig::validate() const {
  if (epsilons.empty()) throw std::invalid_argument("epsilon sequence is empty");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0 && epsilons[k] < 1.0)) {
      throw std::invalid_argument("epsilons must lie in (0, 1)");
    }
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw std::invalid_argument("epsilons must be strictly decreasing");
    }
  }
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
}

StateSolution control_to_state_report(const ProblemSpec& spec, const ControlPair& w) {
  return solve_state(spec.robin, spec.pc1, w.u, w.v, spec.solver);
}

Field control_to_state(const ProblemSpec& spec, const ControlPair& w) {
  return control_to_state_report(spec, w).y;
}

double kink_delta(const ProblemSpec& spec, const Field& y) {
  return spec.delta_level ? *spec.delta_level : 1e-8 * field_range(y);
}

CoefficientPair coefficients(const ProblemSpec& spec, const Field& y, double delta_level) {
  const Pc1Function& d = spec.pc1;
  const double tb = d.t_bar();
  CoefficientPair c{Field(y.grid, Vector::Zero(y.size())), Field(y.grid, Vector::Zero(y.size())),
                    std::vector<bool>(y.size())};
  for (int n = 0; n < y.size(); ++n) {
    const double t = y[n];
    c.a_minus[n] = t <= tb + delta_level ? d.d1_slope(t) : d.d2_slope(t);
    c.a_plus[n] = t < tb - delta_level ? d.d1_slope(t) : d.d2_slope(t);
    c.kink_mask[n] = std::abs(t - tb) <= delta_level;
  }
  return c;
}

CoefficientPair coefficients(const ProblemSpec& spec, const Field& y) {
  return coefficients(spec, y, kink_delta(spec, y));
}

Field dir_deriv(const ProblemSpec& spec, const Field& y, const Field& f, const BoundaryField& h) {
  const auto mask = level_set_mask(y, spec.pc1.t_bar(), kink_delta(spec, y));
  return solve_directional(spec.robin, spec.pc1, y, mask, f, h, spec.solver);
}

Field g_minus(const ProblemSpec& spec, const Field& y, const Field& f, const BoundaryField& h) {
  return solve_linear(spec.robin, coefficients(spec, y).a_minus, f, h, spec.solver);
}

Field g_plus(const ProblemSpec& spec, const Field& y, const Field& f, const BoundaryField& h) {
  return solve_linear(spec.robin, coefficients(spec, y).a_plus, f, h, spec.solver);
}

Field g_side(const ProblemSpec& spec, Side side, const Field& y, const Field& f,
             const BoundaryField& h) {
  return side == Side::Minus ? g_minus(spec, y, f, h) : g_plus(spec, y, f, h);
}

AdjointPair g_adjoint(const ProblemSpec& spec, const Field& a, const Field& phi) {
  Field zeta = solve_linear(spec.robin, a, phi, BoundaryField::constant(spec.grid, 0.0), spec.solver);
  BoundaryField tr = trace(zeta);
  return {std::move(zeta), std::move(tr)};
}

ControlPair variational_direction(const ProblemSpec& spec, const ControlPair& w, Side side) {
  ControlPair dir = ControlPair::constant(spec.grid, 1.0, 1.0);
  if (side == Side::Plus) {
    if (spec.u_b) dir.u = *spec.u_b - w.u;
    if (spec.v_b) dir.v = *spec.v_b - w.v;
  }
  return dir;
}

ControlPair perturb_controls(const ProblemSpec& spec, const ControlPair& w, double eps, Side side) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (side == Side::Plus && at_upper_bounds(spec, w)) {
    throw std::invalid_argument("plus perturbation is undefined at the upper bounds");
  }
  const ControlPair dir = variational_direction(spec, w, side);
  return side == Side::Minus ? w - eps * dir : w + eps * dir;
}

double gateaux_defect_at(const ProblemSpec& spec, const Field& y) {
  const double gap = spec.pc1.slope_gap();
  if (gap == 0.0) return 0.0;
  return gap * level_set_measure(y, spec.pc1.t_bar(), kink_delta(spec, y));
}

double gateaux_defect(const ProblemSpec& spec, const ControlPair& w) {
  return gateaux_defect_at(spec, control_to_state(spec, w));
}

namespace {

struct PerturbedState {
  double eps;
  ControlPair w;
  Field y;
  bool degenerate;
};

// Exceptional eps (state sitting on the kink band) are rare; nudge eps a few times.
PerturbedState perturbed_state(const ProblemSpec& spec, const ControlPair& w, double eps,
                               Side side) {
  PerturbedState out{eps, perturb_controls(spec, w, eps, side), Field(), true};
  for (int attempt = 0; attempt <= 5; ++attempt) {
    out.y = control_to_state(spec, out.w);
    if (gateaux_defect_at(spec, out.y) == 0.0) {
      out.degenerate = false;
      return out;
    }
    if (attempt == 5) break;
    out.eps *= 1.0 + 1e-3;
    if (out.eps >= 1.0) break;
    out.w = perturb_controls(spec, w, out.eps, side);
  }
  return out;
}

}  // namespace

std::vector<LimitRow> bouligand_limit_test(const ProblemSpec& spec, const ControlPair& w,
                                           const BouligandLimitConfig& cfg, Side side,
                                           const std::vector<Probe>& probes) {
  cfg.validate();
  const Field y = control_to_state(spec, w);
  std::vector<Field> reference;
  reference.reserve(probes.size());
  for (const auto& p : probes) reference.push_back(g_side(spec, side, y, p.f, p.h));

  std::vector<LimitRow> rows;
  for (double eps : cfg.epsilons) {
    const PerturbedState ps = perturbed_state(spec, w, eps, side);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const Field z = dir_deriv(spec, ps.y, probes[p].f, probes[p].h);
      const Field diff = z - reference[p];
      rows.push_back({ps.eps, cfg.rho(ps.eps), static_cast<int>(p), norm_h1(spec.robin, diff),
                      norm_max(diff), ps.degenerate});
    }
  }
  return rows;
}

Field wset_formula(const ProblemSpec& spec, const ControlPair& w, const Field& y, double sigma,
                   Side side, const Field& f, const BoundaryField& h) {
  const ControlPair dir = variational_direction(spec, w, side);
  const double s = side == Side::Minus ? -sigma : sigma;
  const Field gf = f + s * dir.u;
  const BoundaryField gh = h + s * dir.v;
  return dir_deriv(spec, y, gf, gh) - g_side(spec, side, y, gf, gh);
}

WsetResult wset_limit_test(const ProblemSpec& spec, const ControlPair& w,
                           const BouligandLimitConfig& cfg, Side side, const Field& f,
                           const BoundaryField& h) {
  cfg.validate();
  if (side == Side::Plus && at_upper_bounds(spec, w)) {
    throw std::invalid_argument("plus side is undefined at the upper bounds");
  }
  const Field y = control_to_state(spec, w);
  WsetResult out;
  out.e_formula = wset_formula(spec, w, y, cfg.sigma, side, f, h);
  for (double eps : cfg.epsilons) {
    const PerturbedState ps = perturbed_state(spec, w, eps, side);
    const double rho = cfg.rho(ps.eps);
    const Field y_shift = control_to_state(spec, {ps.w.u + rho * f, ps.w.v + rho * h});
    const Field z = dir_deriv(spec, ps.y, f, h);
    const Field eta = y_shift - ps.y - rho * z;
    out.e_numeric = (1.0 / rho) * eta;
    const Field diff = out.e_numeric - out.e_formula;
    out.rows.push_back(
        {ps.eps, rho, 0, norm_h1(spec.robin, diff), norm_max(diff), ps.degenerate});
  }
  return out;
}

}  // namespace nsoc
