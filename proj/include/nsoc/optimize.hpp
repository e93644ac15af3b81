#pragma once

#include "nsoc/objective.hpp"
#include "nsoc/stationarity.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace nsoc {

struct OptimizeConfig {
  int max_iters = 500;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
  double initial_step = 1.0;
  double tol = 1e-8;  // on |w - P(w - g)|
  /// Barzilai-Borwein trial steps after the first iteration; off = always start at initial_step
  bool bb_steps = true;
  std::optional<ControlPair> initial;
  int b_stat_probes = 20;  // sample check recorded at termination, 0 to skip
  std::uint64_t seed = 0;

  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double pg_norm = 0.0;
  double step = 0.0;
  double defect = 0.0;
  double armijo_decrease = 0.0;  // J(w_k) - J(w_{k+1})
};

struct OptimizeResult {
  ControlPair w;
  Field y;
  std::vector<TraceRow> trace;
  bool converged = false;
  int iterations = 0;
  std::optional<BStationarity> b_stat;
};

class LineSearchFailure : public std::runtime_error {
 public:
  LineSearchFailure(const std::string& what, OptimizeResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const OptimizeResult& partial() const { return partial_; }

 private:
  OptimizeResult partial_;
};

/// Nodewise min(u, u_b), min(v, v_b).
ControlPair project_admissible(const ProblemSpec& spec, const ControlPair& w);

/// Projected-gradient norm |w - P(w - g)| with the L2(Omega) x L2(Gamma) gradient g.
double projected_gradient_norm(const ProblemSpec& spec, const ControlPair& w,
                               const ReducedGradient& g);

/// Projected gradient descent over the admissible set with Armijo backtracking.
OptimizeResult minimize(const ProblemSpec& spec, const OptimizeConfig& cfg = {});

}  // namespace nsoc
