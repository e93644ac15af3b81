#include "nsoc/nonsmooth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsoc {

bool CubicBranch::globally_monotone() const {
  if (c3 == 0.0) return c2 == 0.0 && c1 >= 0.0;
  // slope is a quadratic 3 c3 s^2 + 2 c2 s + c1; nonnegative iff upward with no sign change
  return c3 > 0.0 && c2 * c2 <= 3.0 * c1 * c3;
}

Pc1Function::Pc1Function(double t_bar, CubicBranch left, CubicBranch right, std::string kind)
    : t_bar_(t_bar), left_(left), right_(right), kind_(std::move(kind)) {
  if (!std::isfinite(t_bar)) throw std::invalid_argument("kink location must be finite");
  if (!left_.globally_monotone() || !right_.globally_monotone()) {
    throw std::invalid_argument("branches of d must be monotonically increasing");
  }
  const double gap = std::abs(left_.c0 - right_.c0);
  if (gap > 1e-14 * std::max(1.0, std::abs(left_.c0))) {
    std::ostringstream msg;
    msg << "branches of d must agree at the kink: d1(t_bar) = " << left_.c0
        << ", d2(t_bar) = " << right_.c0;
    throw std::invalid_argument(msg.str());
  }
}

Pc1Function Pc1Function::max0() {
  return Pc1Function(0.0, CubicBranch{0.0, 0.0, 0.0, 0.0}, CubicBranch{0.0, 1.0, 0.0, 0.0}, "max0");
}

Pc1Function Pc1Function::kink(double s1, double s2, double t_bar, double value) {
  if (!(s1 >= 0.0) || !(s2 >= 0.0)) throw std::invalid_argument("kink slopes must be >= 0");
  return Pc1Function(t_bar, CubicBranch{value, s1, 0.0, 0.0}, CubicBranch{value, s2, 0.0, 0.0},
                     "kink");
}

Pc1Function Pc1Function::smooth(double t_bar) {
  // t + t^3/3 about the origin, re-expanded around t_bar so both branches coincide
  const double c0 = t_bar + t_bar * t_bar * t_bar / 3.0;
  const CubicBranch b{c0, 1.0 + t_bar * t_bar, t_bar, 1.0 / 3.0};
  return Pc1Function(t_bar, b, b, "smooth");
}

double Pc1Function::slope_gap() const { return std::abs(left_.c1 - right_.c1); }

double Pc1Function::max_slope(double lo, double hi) const {
  // slopes are convex quadratics (or constants), so the max sits at an endpoint
  double m = 0.0;
  for (double t : {lo, hi}) {
    m = std::max({m, d1_slope(t), d2_slope(t)});
  }
  return m;
}

double pc1_eval(const Pc1Function& d, double t) { return t <= d.t_bar() ? d.d1(t) : d.d2(t); }

double pc1_dir_deriv(const Pc1Function& d, double t, double s) {
  if (t < d.t_bar()) return d.d1_slope(t) * s;
  if (t > d.t_bar()) return d.d2_slope(t) * s;
  if (s < 0.0) return d.d1_slope(t) * s;
  if (s > 0.0) return d.d2_slope(t) * s;
  return 0.0;
}

std::vector<double> bouligand_subdiff(const Pc1Function& d, double t) {
  if (t < d.t_bar()) return {d.d1_slope(t)};
  if (t > d.t_bar()) return {d.d2_slope(t)};
  const double a = d.d1_slope(t);
  const double b = d.d2_slope(t);
  if (a == b) return {a};
  return {a, b};
}

Interval clarke_interval(const Pc1Function& d, double t) {
  const auto s = bouligand_subdiff(d, t);
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return {*lo, *hi};
}

Field superpose(const Pc1Function& d, const Field& y) {
  Vector v(y.size());
  for (int n = 0; n < y.size(); ++n) v[n] = pc1_eval(d, y[n]);
  return Field(y.grid, std::move(v));
}

Field superpose_d1_slope(const Pc1Function& d, const Field& y) {
  Vector v(y.size());
  for (int n = 0; n < y.size(); ++n) v[n] = d.d1_slope(y[n]);
  return Field(y.grid, std::move(v));
}

Field superpose_d2_slope(const Pc1Function& d, const Field& y) {
  Vector v(y.size());
  for (int n = 0; n < y.size(); ++n) v[n] = d.d2_slope(y[n]);
  return Field(y.grid, std::move(v));
}

Field superpose_dir_deriv(const Pc1Function& d, const Field& y, const Field& s,
                          const std::vector<bool>& kink_mask) {
  require_same_grid(*y.grid, *s.grid);
  Vector v(y.size());
  for (int n = 0; n < y.size(); ++n) {
    if (kink_mask[n]) {
      v[n] = s[n] < 0.0 ? d.d1_slope(y[n]) * s[n] : (s[n] > 0.0 ? d.d2_slope(y[n]) * s[n] : 0.0);
    } else {
      v[n] = pc1_dir_deriv(d, y[n], s[n]);
    }
  }
  return Field(y.grid, std::move(v));
}

}  // namespace nsoc
