#pragma once

#include "nsoc/grid.hpp"
#include "nsoc/nonsmooth.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nsoc {

enum class KinkBranch { Left, Right };

struct ArmijoParams {
  double c = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 30;
};

struct SolverConfig {
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  ArmijoParams line_search;
  double linear_tol = 1e-12;
  int linear_max_iter = 0;  // 0 -> 10 * number of unknowns
  KinkBranch kink_branch = KinkBranch::Right;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  int picard_steps = 0;
  double residual = 0.0;
  bool converged = false;
  int linear_solves = 0;
  long linear_iterations = 0;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(report) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

struct StateSolution {
  Field y;
  SolveReport report;
};

/// Right-hand side M f + W h of the discrete weak form.
Vector load_vector(const Field& f, const BoundaryField& h);

/**
 * Solves A y + M d(y) = M u + W v by semismooth Newton with Armijo damping on
 * the residual, falling back to a monotone Picard sweep when Newton stalls.
 */
StateSolution solve_state(const RobinOperator& A, const Pc1Function& d, const Field& u,
                          const BoundaryField& v, const SolverConfig& cfg = {});

/// Residual of the discrete state equation in the M^{-1}-weighted norm.
double state_residual(const RobinOperator& A, const Pc1Function& d, const Field& y,
                      const Field& u, const BoundaryField& v);

/// Solves (A + M diag(a)) z = M f + W h by conjugate gradients; a >= 0 nodewise.
Field solve_linear(const RobinOperator& A, const Field& a, const Field& f, const BoundaryField& h,
                   const SolverConfig& cfg = {}, SolveReport* stats = nullptr);

/**
 * Solves A delta + M d'(y; delta) = M f + W h. Nodes in `kink_mask` use the
 * one-sided slopes selected by the sign of delta.
 */
Field solve_directional(const RobinOperator& A, const Pc1Function& d, const Field& y,
                        const std::vector<bool>& kink_mask, const Field& f, const BoundaryField& h,
                        const SolverConfig& cfg = {}, SolveReport* stats = nullptr);

}  // namespace nsoc
