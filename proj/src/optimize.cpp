#include "nsoc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsoc {

void OptimizeConfig::validate() const {
  if (max_iters < 0 || max_backtracks < 1) throw std::invalid_argument("bad iteration limits");
  if (!(armijo_c > 0.0 && armijo_c < 1.0) || !(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("Armijo parameters must lie in (0, 1)");
  }
  if (!(initial_step > 0.0) || !(tol > 0.0)) {
    throw std::invalid_argument("step and tolerance must be positive");
  }
}

ControlPair project_admissible(const ProblemSpec& spec, const ControlPair& w) {
  ControlPair p = w;
  if (spec.u_b) p.u.values = p.u.values.cwiseMin(spec.u_b->values);
  if (spec.v_b) p.v.values = p.v.values.cwiseMin(spec.v_b->values);
  return p;
}

double projected_gradient_norm(const ProblemSpec& spec, const ControlPair& w,
                               const ReducedGradient& g) {
  const ControlPair moved = project_admissible(spec, ControlPair{w.u - g.gu, w.v - g.gv});
  return norm(w - moved);
}

OptimizeResult minimize(const ProblemSpec& spec, const OptimizeConfig& cfg) {
  cfg.validate();
  OptimizeResult res;
  res.w = project_admissible(spec, cfg.initial ? *cfg.initial : ControlPair::zero(spec.grid));
  res.y = control_to_state(spec, res.w);
  double J = objective_at(spec, res.w, res.y);
  ReducedGradient g = reduced_gradient(spec, res.w, res.y);
  double pg = projected_gradient_norm(spec, res.w, g);
  res.trace.push_back({0, J, pg, 0.0, g.defect, 0.0});

  double step = cfg.initial_step;
  std::optional<ControlPair> prev_w, prev_g;
  while (pg > cfg.tol && res.iterations < cfg.max_iters) {
    if (cfg.bb_steps && prev_w) {
      const ControlPair s = res.w - *prev_w;
      const ControlPair yk = ControlPair{g.gu, g.gv} - *prev_g;
      const double sy = inner(s, yk);
      if (sy > 0.0) step = std::clamp(inner(s, s) / sy, 1e-8, 1e8);
    }
    double t = step;
    bool accepted = false;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
      const ControlPair trial =
          project_admissible(spec, ControlPair{res.w.u - t * g.gu, res.w.v - t * g.gv});
      const double move2 = inner(res.w - trial, res.w - trial);
      const Field yt = control_to_state(spec, trial);
      // J(w+) - J(w) through its exact expansion around w; J itself is only known to rounding
      const double change = objective_difference(spec, trial, yt, res.w, res.y).rhs;
      const double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::abs(J);
      if (change <= -cfg.armijo_c * move2 / t + noise) {
        prev_w = res.w;
        prev_g = ControlPair{g.gu, g.gv};
        res.w = trial;
        res.y = yt;
        ++res.iterations;
        J = objective_at(spec, res.w, res.y);
        g = reduced_gradient(spec, res.w, res.y);
        pg = projected_gradient_norm(spec, res.w, g);
        res.trace.push_back({res.iterations, J, pg, t, g.defect, -change});
        accepted = true;
        break;
      }
      t *= cfg.backtrack;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "Armijo line search failed at iteration " << res.iterations
          << " (projected-gradient norm " << pg << ")";
      throw LineSearchFailure(msg.str(), res);
    }
    if (!cfg.bb_steps) step = cfg.initial_step;
  }
  res.converged = pg <= cfg.tol;
  if (cfg.b_stat_probes > 0) {
    res.b_stat = check_b_stationarity(spec, res.w, cfg.b_stat_probes, cfg.seed);
  }
  return res;
}

}  // namespace nsoc
