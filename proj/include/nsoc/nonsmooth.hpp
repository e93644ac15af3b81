#pragma once

#include "nsoc/grid.hpp"

#include <string>
#include <vector>

namespace nsoc {

/// Monotone cubic c0 + c1 s + c2 s^2 + c3 s^3 in the shifted argument s = t - center.
struct CubicBranch {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  double value(double s) const { return c0 + s * (c1 + s * (c2 + s * c3)); }
  double slope(double s) const { return c1 + s * (2.0 * c2 + 3.0 * s * c3); }
  /// True when the slope is nonnegative on the whole real line.
  bool globally_monotone() const;
};

/**
 * Continuous monotone function with a single kink:
 *   d(t) = left(t)  for t <= t_bar,
 *   d(t) = right(t) for t >  t_bar.
 * Both branches are monotone C^1 cubics and agree at t_bar.
 */
class Pc1Function {
 public:
  Pc1Function(double t_bar, CubicBranch left, CubicBranch right, std::string kind = "cubic");

  static Pc1Function max0();
  static Pc1Function kink(double s1, double s2, double t_bar, double value = 0.0);
  static Pc1Function smooth(double t_bar = 0.0);

  double t_bar() const { return t_bar_; }
  const std::string& kind() const { return kind_; }
  const CubicBranch& left() const { return left_; }
  const CubicBranch& right() const { return right_; }

  double d1(double t) const { return left_.value(t - t_bar_); }
  double d2(double t) const { return right_.value(t - t_bar_); }
  double d1_slope(double t) const { return left_.slope(t - t_bar_); }
  double d2_slope(double t) const { return right_.slope(t - t_bar_); }

  /// Slope jump |d1'(t_bar) - d2'(t_bar)|.
  double slope_gap() const;
  /// Largest branch slope over [lo, hi].
  double max_slope(double lo, double hi) const;

 private:
  double t_bar_;
  CubicBranch left_;
  CubicBranch right_;
  std::string kind_;
};

double pc1_eval(const Pc1Function& d, double t);

/// d'(t; s). Membership t == t_bar is exact.
double pc1_dir_deriv(const Pc1Function& d, double t, double s);

/// One or two slopes; {d1'(t_bar), d2'(t_bar)} at the kink.
std::vector<double> bouligand_subdiff(const Pc1Function& d, double t);

struct Interval {
  double lo;
  double hi;
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

Interval clarke_interval(const Pc1Function& d, double t);

Field superpose(const Pc1Function& d, const Field& y);
Field superpose_d1_slope(const Pc1Function& d, const Field& y);
Field superpose_d2_slope(const Pc1Function& d, const Field& y);
/// Nodewise d'(y; s); nodes in `kink_mask` are treated as sitting on t_bar.
Field superpose_dir_deriv(const Pc1Function& d, const Field& y, const Field& s,
                          const std::vector<bool>& kink_mask);

}  // namespace nsoc
