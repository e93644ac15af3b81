#include "nsoc/nnls.hpp"

#include <algorithm>
#include <vector>

namespace nsoc {

namespace {

// Least squares restricted to the passive columns, through the small Gram system.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& atb,
                              const std::vector<int>& passive, int n) {
  const int p = static_cast<int>(passive.size());
  Eigen::MatrixXd g(p, p);
  Eigen::VectorXd r(p);
  for (int i = 0; i < p; ++i) {
    r[i] = atb[passive[i]];
    for (int j = 0; j < p; ++j) g(i, j) = gram(passive[i], passive[j]);
  }
  const Eigen::VectorXd zp = g.ldlt().solve(r);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < p; ++i) z[passive[i]] = zp[i];
  return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter, double tol) {
  const int n = static_cast<int>(A.cols());
  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    out.residual_norm = b.norm();
    out.converged = true;
    return out;
  }
  if (max_iter <= 0) max_iter = 3 * n + 10;
  const Eigen::MatrixXd gram = A.transpose() * A;
  const Eigen::VectorXd atb = A.transpose() * b;
  if (tol <= 0.0) {
    tol = 1e-13 * std::max({1e-300, atb.cwiseAbs().maxCoeff(), gram.diagonal().maxCoeff()});
  }

  std::vector<bool> in_passive(n, false);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  int iter = 0;
  while (iter < max_iter) {
    const Eigen::VectorXd w = atb - gram * x;
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j) {
      if (!in_passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) {
      out.converged = true;
      break;
    }
    in_passive[best] = true;

    while (iter < max_iter) {
      ++iter;
      std::vector<int> passive;
      for (int j = 0; j < n; ++j)
        if (in_passive[j]) passive.push_back(j);
      const Eigen::VectorXd z = passive_solve(gram, atb, passive, n);
      bool feasible = true;
      for (int j : passive) feasible = feasible && z[j] > 0.0;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (int j : passive) {
        if (z[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      }
      x += alpha * (z - x);
      for (int j : passive) {
        if (x[j] <= 1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
          x[j] = 0.0;
          in_passive[j] = false;
        }
      }
    }
  }
  out.x = x;
  out.iterations = iter;
  out.residual_norm = (A * x - b).norm();
  return out;
}

}  // namespace nsoc
