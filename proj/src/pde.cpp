#include "nsoc/pde.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nsoc {

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0) || !(linear_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (newton_max_iter < 1 || linear_max_iter < 0 || line_search.max_backtracks < 1) {
    throw std::invalid_argument("solver iteration limits must be >= 1");
  }
  if (!(line_search.c > 0.0 && line_search.c < 1.0) ||
      !(line_search.backtrack > 0.0 && line_search.backtrack < 1.0)) {
    throw std::invalid_argument("Armijo parameters must lie in (0, 1)");
  }
}

Vector load_vector(const Field& f, const BoundaryField& h) {
  require_same_grid(*f.grid, *h.grid);
  const Grid& g = *f.grid;
  Vector rhs = g.node_weights().cwiseProduct(f.values);
  for (int k = 0; k < g.num_boundary(); ++k) {
    rhs[g.perimeter_node(k)] += g.boundary_weights()[k] * h[k];
  }
  return rhs;
}

namespace {

double weighted_norm(const Vector& r, const Vector& w) {
  return std::sqrt((r.array().square() / w.array()).sum());
}

SparseMatrix shifted(const RobinOperator& A, const Vector& diag_shift) {
  SparseMatrix K = A.matrix;
  for (int n = 0; n < K.rows(); ++n) K.coeffRef(n, n) += diag_shift[n];
  return K;
}

Vector cg_solve(const SparseMatrix& K, const Vector& rhs, const SolverConfig& cfg,
                SolveReport* stats) {
  if (rhs.squaredNorm() == 0.0) return Vector::Zero(rhs.size());
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(cfg.linear_tol);
  cg.setMaxIterations(cfg.linear_max_iter > 0 ? cfg.linear_max_iter
                                              : 10 * static_cast<int>(rhs.size()));
  cg.compute(K);
  Vector x = cg.solve(rhs);
  if (stats) {
    stats->linear_solves += 1;
    stats->linear_iterations += cg.iterations();
  }
  if (cg.info() != Eigen::Success || !x.allFinite()) {
    // CG can stall a hair above the tolerance from rounding; accept if the true residual is close
    const double rel = (K * x - rhs).norm() / rhs.norm();
    if (!x.allFinite() || rel > 100.0 * cfg.linear_tol) {
      SolveReport r = stats ? *stats : SolveReport{};
      r.residual = rel;
      std::ostringstream msg;
      msg << "conjugate gradient did not converge: relative residual " << rel << " after "
          << cg.iterations() << " iterations";
      throw NonConvergence(msg.str(), r);
    }
  }
  return x;
}

Vector bouligand_slopes(const Pc1Function& d, const Vector& y, KinkBranch branch) {
  Vector g(y.size());
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    const double t = y[n];
    if (t < d.t_bar()) {
      g[n] = d.d1_slope(t);
    } else if (t > d.t_bar()) {
      g[n] = d.d2_slope(t);
    } else {
      g[n] = branch == KinkBranch::Left ? d.d1_slope(t) : d.d2_slope(t);
    }
  }
  return g;
}

Vector apply_d(const Pc1Function& d, const Vector& y) {
  Vector out(y.size());
  for (Eigen::Index n = 0; n < y.size(); ++n) out[n] = pc1_eval(d, y[n]);
  return out;
}

}  // namespace

double state_residual(const RobinOperator& A, const Pc1Function& d, const Field& y,
                      const Field& u, const BoundaryField& v) {
  const Vector& w = y.grid->node_weights();
  const Vector r = A.matrix * y.values + w.cwiseProduct(apply_d(d, y.values)) - load_vector(u, v);
  return weighted_norm(r, w);
}

StateSolution solve_state(const RobinOperator& A, const Pc1Function& d, const Field& u,
                          const BoundaryField& v, const SolverConfig& cfg) {
  cfg.validate();
  require_same_grid(*A.grid, *u.grid);
  require_same_grid(*A.grid, *v.grid);
  const Grid& g = *A.grid;
  const Vector& w = g.node_weights();
  const Vector rhs = load_vector(u, v);
  const double target = cfg.newton_tol * (1.0 + weighted_norm(rhs, w));

  auto residual = [&](const Vector& y) -> Vector {
    return A.matrix * y + w.cwiseProduct(apply_d(d, y)) - rhs;
  };

  SolveReport report;
  Vector y = Vector::Zero(g.num_nodes());
  Vector F = residual(y);
  double rnorm = weighted_norm(F, w);
  int stalls = 0;
  // Newton matrices share the sparsity pattern of A; the symbolic factorization is done once
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  ldlt.analyzePattern(A.matrix);

  while (rnorm > target && report.iterations < cfg.newton_max_iter) {
    ++report.iterations;
    const Vector slopes = bouligand_slopes(d, y, cfg.kink_branch);
    ldlt.factorize(shifted(A, w.cwiseProduct(slopes)));
    if (ldlt.info() != Eigen::Success) throw NonConvergence("Newton matrix factorization failed", report);
    const Vector step = ldlt.solve(-F);
    ++report.linear_solves;

    double s = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= cfg.line_search.max_backtracks; ++bt) {
      const Vector trial = y + s * step;
      const Vector Ft = residual(trial);
      const double tn = weighted_norm(Ft, w);
      if (tn * tn <= (1.0 - 2.0 * cfg.line_search.c * s) * rnorm * rnorm || tn <= target) {
        y = trial;
        F = Ft;
        accepted = true;
        stalls = tn > 0.5 * rnorm ? stalls + 1 : 0;
        rnorm = tn;
        break;
      }
      s *= cfg.line_search.backtrack;
    }

    if (!accepted || stalls >= 3) {
      // Picard sweep y <- (A + lambda M)^{-1}(M(u + lambda y - d(y)) + W v), monotone for d' <= lambda
      stalls = 0;
      for (int sweep = 0; sweep < 20 && rnorm > target; ++sweep) {
        const double lambda =
            std::max(1e-12, d.max_slope(y.minCoeff() - 1.0, y.maxCoeff() + 1.0));
        const Field shift = Field::constant(A.grid, lambda);
        const Field src(A.grid, u.values + lambda * y - apply_d(d, y));
        y = solve_linear(A, shift, src, v, cfg, &report).values;
        F = residual(y);
        rnorm = weighted_norm(F, w);
        ++report.picard_steps;
      }
    }
  }

  report.residual = rnorm;
  report.converged = rnorm <= target;
  if (!report.converged) {
    std::ostringstream msg;
    msg << "state solve did not converge: residual " << rnorm << " > " << target << " after "
        << report.iterations << " Newton iterations";
    throw NonConvergence(msg.str(), report);
  }
  return {Field(A.grid, std::move(y)), report};
}

Field solve_linear(const RobinOperator& A, const Field& a, const Field& f, const BoundaryField& h,
                   const SolverConfig& cfg, SolveReport* stats) {
  require_same_grid(*A.grid, *a.grid);
  require_same_grid(*A.grid, *f.grid);
  require_same_grid(*A.grid, *h.grid);
  if (a.values.size() && a.values.minCoeff() < 0.0) {
    throw std::invalid_argument("linear solve needs a nonnegative coefficient field");
  }
  const Vector& w = A.grid->node_weights();
  const SparseMatrix K = shifted(A, w.cwiseProduct(a.values));
  return Field(A.grid, cg_solve(K, load_vector(f, h), cfg, stats));
}

Field solve_directional(const RobinOperator& A, const Pc1Function& d, const Field& y,
                        const std::vector<bool>& kink_mask, const Field& f, const BoundaryField& h,
                        const SolverConfig& cfg, SolveReport* stats) {
  require_same_grid(*A.grid, *y.grid);
  const Vector& w = A.grid->node_weights();
  const int n = y.size();
  const Vector rhs = load_vector(f, h);

  // d'(y; .) is linear off the mask; on the mask the slope follows the sign of delta
  Vector coef(n);
  for (int i = 0; i < n; ++i) {
    if (kink_mask[i]) {
      coef[i] = cfg.kink_branch == KinkBranch::Left ? d.d1_slope(y[i]) : d.d2_slope(y[i]);
    } else {
      coef[i] = y[i] < d.t_bar() ? d.d1_slope(y[i]) : d.d2_slope(y[i]);
    }
  }

  SolveReport local;
  Field delta;
  bool changed = true;
  for (int it = 0; it < cfg.newton_max_iter && changed; ++it) {
    ++local.iterations;
    delta = solve_linear(A, Field(A.grid, coef), f, h, cfg, &local);
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (!kink_mask[i] || delta[i] == 0.0) continue;
      const double c = delta[i] > 0.0 ? d.d2_slope(y[i]) : d.d1_slope(y[i]);
      if (c != coef[i]) {
        coef[i] = c;
        changed = true;
      }
    }
  }

  // a settled sign pattern makes delta a linear solve, so the residual is at CG accuracy
  const double tol = std::max({cfg.newton_tol, 1e3 * cfg.linear_tol,
                               1e5 * std::numeric_limits<double>::epsilon()});
  const Vector dd = superpose_dir_deriv(d, y, delta, kink_mask).values;
  const Vector r = A.matrix * delta.values + w.cwiseProduct(dd) - rhs;
  local.residual = weighted_norm(r, w);
  local.converged = !changed && local.residual <= tol * (1.0 + weighted_norm(rhs, w));
  if (stats) {
    stats->iterations += local.iterations;
    stats->linear_solves += local.linear_solves;
    stats->linear_iterations += local.linear_iterations;
    stats->residual = local.residual;
    stats->converged = local.converged;
  }
  if (!local.converged) {
    std::ostringstream msg;
    msg << "directional solve did not converge: residual " << local.residual << " after "
        << local.iterations << " sign-pattern updates";
    throw NonConvergence(msg.str(), local);
  }
  return delta;
}

}  // namespace nsoc
