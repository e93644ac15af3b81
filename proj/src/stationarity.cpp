#include "nsoc/stationarity.hpp"

#include "nsoc/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nsoc {

namespace {

Field project_u(const ProblemSpec& spec, Field u) {
  if (spec.u_b) u.values = u.values.cwiseMin(spec.u_b->values);
  return u;
}

BoundaryField project_v(const ProblemSpec& spec, BoundaryField v) {
  if (spec.v_b) v.values = v.values.cwiseMin(spec.v_b->values);
  return v;
}

Vector sign_of(const Vector& x) {
  return x.unaryExpr([](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); });
}

}  // namespace

BStationarity check_b_stationarity(const ProblemSpec& spec, const ControlPair& w, int n_probes,
                                   std::uint64_t seed, const StationarityTolerances& tol) {
  if (!is_admissible(spec, w)) throw std::invalid_argument("B-stationarity check needs an admissible control");
  const GridPtr& g = spec.grid;
  const double R = tol.probe_radius;
  const Field y = control_to_state(spec, w);
  const ReducedGradient grad = reduced_gradient(spec, w, y);

  std::vector<std::pair<std::string, ControlPair>> candidates;
  candidates.emplace_back("self", w);
  if (spec.u_b || spec.v_b) {
    candidates.emplace_back("bounds", ControlPair{spec.u_b ? *spec.u_b : w.u,
                                                  spec.v_b ? *spec.v_b : w.v});
  }
  candidates.emplace_back("minus-ones", ControlPair{w.u - Field::constant(g, R),
                                                    w.v - BoundaryField::constant(g, R)});
  candidates.emplace_back(
      "gradient-sign",
      ControlPair{project_u(spec, Field(g, w.u.values - R * sign_of(grad.gu.values))),
                  project_v(spec, BoundaryField(g, w.v.values - R * sign_of(grad.gv.values)))});
  candidates.emplace_back(
      "gradient-step",
      ControlPair{project_u(spec, w.u - grad.gu), project_v(spec, w.v - grad.gv)});
  candidates.emplace_back(
      "anti-gradient-sign",
      ControlPair{project_u(spec, Field(g, w.u.values + R * sign_of(grad.gu.values))),
                  project_v(spec, BoundaryField(g, w.v.values + R * sign_of(grad.gv.values)))});

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_node(0, g->num_nodes() - 1);
  std::uniform_int_distribution<int> pick_slot(0, g->num_boundary() - 1);

  // coordinate bumps at a few seeded nodes, both signs
  for (int k = 0; k < 4; ++k) {
    const int n = pick_node(rng);
    const int s = pick_slot(rng);
    for (double sgn : {-1.0, 1.0}) {
      ControlPair c = w;
      c.u[n] += sgn * R;
      c.v[s] += sgn * R;
      c.u = project_u(spec, c.u);
      c.v = project_v(spec, c.v);
      candidates.emplace_back(sgn > 0 ? "bump+" : "bump-", c);
    }
  }

  int draw = 0;
  while (static_cast<int>(candidates.size()) < n_probes) {
    ControlPair c = w;
    const bool band = (draw % 2 == 1) && (spec.u_b || spec.v_b);
    for (int n = 0; n < g->num_nodes(); ++n) {
      const double r = unit(rng);
      c.u[n] = band && spec.u_b ? (*spec.u_b)[n] - R * r : w.u[n] + R * (2.0 * r - 1.0);
    }
    for (int k = 0; k < g->num_boundary(); ++k) {
      const double r = unit(rng);
      c.v[k] = band && spec.v_b ? (*spec.v_b)[k] - R * r : w.v[k] + R * (2.0 * r - 1.0);
    }
    c.u = project_u(spec, c.u);
    c.v = project_v(spec, c.v);
    candidates.emplace_back(band ? "random-band" : "random", c);
    ++draw;
  }

  BStationarity out;
  out.scale = 1.0 + std::abs(objective_at(spec, w, y));
  out.min_value = 0.0;
  for (const auto& [kind, c] : candidates) {
    const double val = objective_dir_deriv(spec, w, y, c.u - w.u, c.v - w.v);
    out.probes.push_back({kind, val});
    out.min_value = std::min(out.min_value, val);
  }
  out.pass = out.min_value >= -tol.b_stat_rel * out.scale;
  return out;
}

double active_tolerance_omega(const ProblemSpec& spec) {
  return spec.u_b ? 1e-8 * (1.0 + norm_max(*spec.u_b)) : 0.0;
}

double active_tolerance_gamma(const ProblemSpec& spec) {
  return spec.v_b ? 1e-8 * (1.0 + spec.v_b->values.cwiseAbs().maxCoeff()) : 0.0;
}

std::vector<bool> active_set_omega(const ProblemSpec& spec, const ControlPair& w) {
  std::vector<bool> act(w.u.size(), false);
  if (!spec.u_b) return act;
  const double t = active_tolerance_omega(spec);
  for (int n = 0; n < w.u.size(); ++n) act[n] = std::abs(w.u[n] - (*spec.u_b)[n]) <= t;
  return act;
}

std::vector<bool> active_set_gamma(const ProblemSpec& spec, const ControlPair& w) {
  std::vector<bool> act(w.v.size(), false);
  if (!spec.v_b) return act;
  const double t = active_tolerance_gamma(spec);
  for (int k = 0; k < w.v.size(); ++k) act[k] = std::abs(w.v[k] - (*spec.v_b)[k]) <= t;
  return act;
}

double cq_threshold(const ProblemSpec& spec) { return std::max(spec.grid->hx(), spec.grid->hy()); }

double check_cq(const ProblemSpec& spec, const ControlPair& w, const Field& y) {
  if (!spec.u_b) return 0.0;
  const Grid& g = *spec.grid;
  const auto active = active_set_omega(spec, w);
  const auto band = level_set_mask(y, spec.pc1.t_bar(), cq_threshold(spec));
  double m = 0.0;
  for (int n = 0; n < g.num_nodes(); ++n) {
    if (!band[n]) continue;
    const int i = g.col(n);
    const int j = g.row(n);
    bool near = false;
    for (int dj = -1; dj <= 1 && !near; ++dj) {
      for (int di = -1; di <= 1 && !near; ++di) {
        const int ii = i + di;
        const int jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= g.nx() || jj >= g.ny()) continue;
        near = active[g.index(ii, jj)];
      }
    }
    if (near) m += g.node_weights()[n];
  }
  return m;
}

double StrongRecord::max_residual() const {
  return std::max({inactive_omega, active_omega, inactive_gamma, active_gamma, sign, clarke});
}

StrongRecord check_strong_stationarity(const ProblemSpec& spec, const ControlPair& w,
                                       const Field& y, const StationarityTolerances& tol) {
  const Pc1Function& d = spec.pc1;
  const CoefficientPair coef = coefficients(spec, y);
  StrongRecord r;
  r.a_tilde = coef.a_minus;
  r.p = tracking_adjoint(spec, r.a_tilde, y);
  r.zeta_omega = -(r.p + spec.kappa_omega * w.u);
  r.zeta_gamma = -(trace(r.p) + spec.kappa_gamma * w.v);

  const auto act_o = active_set_omega(spec, w);
  const auto act_g = active_set_gamma(spec, w);
  for (int n = 0; n < y.size(); ++n) {
    if (act_o[n]) {
      r.active_omega = std::max(r.active_omega, -r.zeta_omega[n]);
    } else {
      r.inactive_omega = std::max(r.inactive_omega, std::abs(r.zeta_omega[n]));
    }
  }
  for (int k = 0; k < w.v.size(); ++k) {
    if (act_g[k]) {
      r.active_gamma = std::max(r.active_gamma, -r.zeta_gamma[k]);
    } else {
      r.inactive_gamma = std::max(r.inactive_gamma, std::abs(r.zeta_gamma[k]));
    }
  }
  const double jump = d.d1_slope(d.t_bar()) - d.d2_slope(d.t_bar());
  for (int n = 0; n < y.size(); ++n) {
    Interval ci = clarke_interval(d, y[n]);
    if (coef.kink_mask[n]) {
      r.sign = std::max(r.sign, -r.p[n] * jump);
      const double a1 = d.d1_slope(y[n]);
      const double a2 = d.d2_slope(y[n]);
      ci = {std::min(a1, a2), std::max(a1, a2)};
    }
    const double a = r.a_tilde[n];
    r.clarke = std::max(r.clarke, std::max({0.0, ci.lo - a, a - ci.hi}));
  }
  r.cq = check_cq(spec, w, y);
  r.conditional = r.cq > cq_threshold(spec);
  r.pass = r.max_residual() <= tol.strong;
  return r;
}

MultiplierRecord check_multiplier_system(const ProblemSpec& spec, const ControlPair& w,
                                         const Field& y, Side side,
                                         const StationarityTolerances& tol) {
  if (side == Side::Plus && at_upper_bounds(spec, w)) {
    throw std::invalid_argument("plus multiplier system is undefined at the upper bounds");
  }
  const Grid& g = *spec.grid;
  const int nn = g.num_nodes();
  const int nb = g.num_boundary();
  const CoefficientPair coef = coefficients(spec, y);
  const Field& a = side == Side::Minus ? coef.a_minus : coef.a_plus;
  const double gap = spec.pc1.slope_gap();
  const double sgn = side == Side::Minus ? 1.0 : -1.0;

  std::vector<int> band;
  if (gap > 0.0) {
    for (int n = 0; n < nn; ++n)
      if (coef.kink_mask[n]) band.push_back(n);
  }
  const auto act_o = active_set_omega(spec, w);
  const auto act_g = active_set_gamma(spec, w);
  std::vector<int> zo, zg;
  for (int n = 0; n < nn; ++n)
    if (act_o[n]) zo.push_back(n);
  for (int k = 0; k < nb; ++k)
    if (act_g[k]) zg.push_back(k);

  // residual r = [p + kappa_O u ; trace p + kappa_G v] + [zeta_O ; zeta_G], p = p0 + P mu
  const Field p0 = tracking_adjoint(spec, a, y);
  const Vector sw_o = g.node_weights().cwiseSqrt();
  const Vector sw_g = g.boundary_weights().cwiseSqrt();
  const int rows = nn + nb;
  const int cols = static_cast<int>(band.size() + zo.size() + zg.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
  Vector rhs(rows);
  for (int n = 0; n < nn; ++n) rhs[n] = -sw_o[n] * (p0[n] + spec.kappa_omega * w.u[n]);
  for (int k = 0; k < nb; ++k) {
    rhs[nn + k] = -sw_g[k] * (p0[g.perimeter_node(k)] + spec.kappa_gamma * w.v[k]);
  }
  const BoundaryField zero_h = BoundaryField::constant(spec.grid, 0.0);
  std::vector<Field> columns;
  columns.reserve(band.size());
  for (std::size_t c = 0; c < band.size(); ++c) {
    Field e = Field::constant(spec.grid, 0.0);
    e[band[c]] = sgn * gap;
    Field col = solve_linear(spec.robin, a, e, zero_h, spec.solver);
    for (int n = 0; n < nn; ++n) M(n, c) = sw_o[n] * col[n];
    for (int k = 0; k < nb; ++k) M(nn + k, c) = sw_g[k] * col[g.perimeter_node(k)];
    columns.push_back(std::move(col));
  }
  int c = static_cast<int>(band.size());
  for (int n : zo) M(n, c++) = sw_o[n];
  for (int k : zg) M(nn + k, c++) = sw_g[k];

  const NnlsResult sol = nnls(M, rhs);

  MultiplierRecord r;
  r.side = side;
  r.band_nodes = static_cast<int>(band.size());
  r.mu = Field::constant(spec.grid, 0.0);
  r.p = p0;
  for (std::size_t b = 0; b < band.size(); ++b) {
    r.mu[band[b]] = sol.x[b];
    r.p.values += sol.x[b] * columns[b].values;
  }
  r.zeta_omega = Field::constant(spec.grid, 0.0);
  r.zeta_gamma = BoundaryField::constant(spec.grid, 0.0);
  c = static_cast<int>(band.size());
  for (int n : zo) r.zeta_omega[n] = sol.x[c++];
  for (int k : zg) r.zeta_gamma[k] = sol.x[c++];

  const Field res_o = r.p + spec.kappa_omega * w.u + r.zeta_omega;
  const BoundaryField res_g = trace(r.p) + spec.kappa_gamma * w.v + r.zeta_gamma;
  r.residual_max = std::max(norm_max(res_o), res_g.values.cwiseAbs().maxCoeff());
  r.residual_l2 = std::sqrt(inner_omega(res_o, res_o) + inner_gamma(res_g, res_g));
  r.mu_norm = norm_omega(r.mu);
  r.mu_min = r.mu.values.minCoeff();
  for (int n = 0; n < nn; ++n) {
    if (r.mu[n] != 0.0 && !coef.kink_mask[n]) r.support_in_band = false;
  }
  r.pass = r.residual_max <= tol.multiplier && r.mu_min >= 0.0 && r.support_in_band;
  return r;
}

BoundCaseRecord check_bound_case(const ProblemSpec& spec, const ControlPair& w, const Field& y,
                                 const StationarityTolerances& tol) {
  if (!at_upper_bounds(spec, w)) {
    throw std::invalid_argument("bound-case check needs finite bounds and w = (u_b, v_b)");
  }
  BoundCaseRecord r;
  r.p = tracking_adjoint(spec, coefficients(spec, y).a_minus, y);
  r.omega = ((-1.0 / spec.kappa_omega) * r.p - *spec.u_b).values.minCoeff();
  r.gamma = ((-1.0 / spec.kappa_gamma) * trace(r.p) - *spec.v_b).values.minCoeff();
  r.pass = r.omega >= -tol.bound_case && r.gamma >= -tol.bound_case;
  return r;
}

AppendixRecord check_appendix_levelset(const ProblemSpec& spec, const ControlPair& w,
                                       const Field& y) {
  const Grid& g = *spec.grid;
  const Field lap = discrete_laplacian(y);
  const auto band = level_set_mask(y, spec.pc1.t_bar(), kink_delta(spec, y));
  const double d_tbar = pc1_eval(spec.pc1, spec.pc1.t_bar());
  AppendixRecord r;
  for (int n = 0; n < g.num_nodes(); ++n) {
    if (g.on_boundary(n)) continue;
    r.strong_residual =
        std::max(r.strong_residual, std::abs(-lap[n] + pc1_eval(spec.pc1, y[n]) - w.u[n]));
    if (band[n]) {
      ++r.band_nodes;
      r.band_laplacian = std::max(r.band_laplacian, std::abs(lap[n]));
      r.band_discrepancy = std::max(r.band_discrepancy, std::abs(w.u[n] - d_tbar));
    }
  }
  return r;
}

EquivalenceVerdict equivalence_verdict(const BStationarity& b, const StrongRecord& s, double cq,
                                       double cq_thr) {
  EquivalenceVerdict v;
  v.b_pass = b.pass;
  v.strong_pass = s.pass;
  v.cq_holds = cq <= cq_thr;
  v.conditional = !v.cq_holds;
  v.strong_implies_b = !(v.strong_pass && !v.b_pass);
  v.b_implies_strong = !(v.b_pass && !v.strong_pass);
  v.pass = v.cq_holds ? (v.strong_implies_b && v.b_implies_strong) : v.strong_implies_b;
  return v;
}

EquivalenceVerdict check_equivalence(const ProblemSpec& spec, const ControlPair& w, int n_probes,
                                     std::uint64_t seed, const StationarityTolerances& tol) {
  const Field y = control_to_state(spec, w);
  const BStationarity b = check_b_stationarity(spec, w, n_probes, seed, tol);
  const StrongRecord s = check_strong_stationarity(spec, w, y, tol);
  return equivalence_verdict(b, s, s.cq, cq_threshold(spec));
}

bool StationarityReport::all_pass() const {
  bool ok = b_stat.pass && strong.pass && equivalence.pass;
  if (multiplier_minus) ok = ok && multiplier_minus->pass;
  if (multiplier_plus) ok = ok && multiplier_plus->pass;
  if (ubvb) ok = ok && ubvb->pass;
  return ok;
}

StationarityReport verify_stationarity(const ProblemSpec& spec, const ControlPair& w,
                                       int n_probes, std::uint64_t seed,
                                       const StationarityTolerances& tol) {
  StationarityReport rep;
  const Field y = control_to_state(spec, w);
  rep.objective = objective_at(spec, w, y);
  rep.b_stat = check_b_stationarity(spec, w, n_probes, seed, tol);
  rep.cq = check_cq(spec, w, y);
  rep.cq_threshold = cq_threshold(spec);
  rep.strong = check_strong_stationarity(spec, w, y, tol);
  rep.multiplier_minus = check_multiplier_system(spec, w, y, Side::Minus, tol);
  if (at_upper_bounds(spec, w)) {
    rep.ubvb = check_bound_case(spec, w, y, tol);
  } else {
    rep.multiplier_plus = check_multiplier_system(spec, w, y, Side::Plus, tol);
  }
  rep.appendix = check_appendix_levelset(spec, w, y);
  rep.equivalence = equivalence_verdict(rep.b_stat, rep.strong, rep.cq, rep.cq_threshold);
  return rep;
}

}  // namespace nsoc
