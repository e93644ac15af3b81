#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace nsoc;
using namespace nsoc::testing;

TEST_CASE("pointwise evaluation") {
  const Pc1Function m = Pc1Function::max0();
  CHECK(pc1_eval(m, -1.0) == 0.0);
  CHECK(pc1_eval(m, 0.5) == 0.5);

  const Pc1Function k = Pc1Function::kink(1.0, 3.0, 2.0);
  CHECK(k.d1(2.0) == k.d2(2.0));
  CHECK(pc1_eval(k, 2.0) == k.d1(2.0));
  CHECK(pc1_eval(k, 3.0) == doctest::Approx(k.d1(2.0) + 3.0));
  CHECK(pc1_eval(k, 1.0) == doctest::Approx(k.d1(2.0) - 1.0));
}

TEST_CASE("construction checks continuity and monotonicity") {
  CHECK_THROWS(Pc1Function(0.0, CubicBranch{0.0, 1.0}, CubicBranch{0.5, 1.0}));
  CHECK_THROWS(Pc1Function(0.0, CubicBranch{0.0, -1.0}, CubicBranch{0.0, 1.0}));
  CHECK_THROWS(Pc1Function(0.0, CubicBranch{0.0, 1.0}, CubicBranch{0.0, 0.0, 0.0, -1.0}));
  CHECK_NOTHROW(curved_kink());
  CHECK(curved_kink().slope_gap() == doctest::Approx(1.5));
  CHECK(Pc1Function::smooth().slope_gap() == 0.0);
}

TEST_CASE("directional derivative") {
  const Pc1Function m = Pc1Function::max0();
  CHECK(pc1_dir_deriv(m, 0.0, -2.0) == 0.0);
  CHECK(pc1_dir_deriv(m, 0.0, 3.0) == 3.0);
  CHECK(pc1_dir_deriv(m, 1.0, -2.0) == -2.0);
  CHECK(pc1_dir_deriv(m, 0.0, 0.0) == 0.0);

  const Pc1Function d = curved_kink();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double t = i % 5 == 0 ? d.t_bar() : u(rng);
    const double s = u(rng);
    for (double lam : {0.0, 0.5, 3.0}) {
      CHECK(pc1_dir_deriv(d, t, lam * s) == doctest::Approx(lam * pc1_dir_deriv(d, t, s)).epsilon(1e-12));
    }
    double prev = 1e300;
    for (double tau : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const double err = std::abs((pc1_eval(d, t + tau * s) - pc1_eval(d, t)) / tau - pc1_dir_deriv(d, t, s));
      CHECK(err <= prev + 1e-9);
      prev = err;
    }
    CHECK(prev <= 1e-5);
  }
}

TEST_CASE("subdifferentials") {
  const Pc1Function m = Pc1Function::max0();
  CHECK(bouligand_subdiff(m, 0.0) == std::vector<double>{0.0, 1.0});
  CHECK(bouligand_subdiff(m, 2.0) == std::vector<double>{1.0});
  const Pc1Function s = Pc1Function::smooth();
  CHECK(bouligand_subdiff(s, s.t_bar()).size() == 1);

  const Interval c0 = clarke_interval(m, 0.0);
  CHECK(c0.lo == 0.0);
  CHECK(c0.hi == 1.0);
  const Interval c5 = clarke_interval(m, -5.0);
  CHECK(c5.lo == 0.0);
  CHECK(c5.hi == 0.0);
  const Interval ck = clarke_interval(Pc1Function::kink(1.0, 3.0, 2.0), 2.0);
  CHECK(ck.lo == 1.0);
  CHECK(ck.hi == 3.0);

  const Pc1Function d = curved_kink();
  for (double t : {-1.0, 0.0, 0.7}) {
    const auto b = bouligand_subdiff(d, t);
    const Interval c = clarke_interval(d, t);
    CHECK(std::find(b.begin(), b.end(), c.lo) != b.end());
    CHECK(std::find(b.begin(), b.end(), c.hi) != b.end());
  }
}

TEST_CASE("superposition matches scalar loops") {
  const Pc1Function d = curved_kink();
  std::mt19937_64 rng(6);
  const GridPtr g = unit_square(9);
  for (int c = 0; c < 3; ++c) {
    const Field y = random_field(g, rng);
    const Field s = random_field(g, rng);
    const Field dy = superpose(d, y);
    const Field s1 = superpose_d1_slope(d, y);
    const Field s2 = superpose_d2_slope(d, y);
    std::vector<bool> mask(y.size(), false);
    for (int n = 0; n < y.size(); n += 7) mask[n] = true;
    const Field dd = superpose_dir_deriv(d, y, s, mask);
    for (int n = 0; n < y.size(); ++n) {
      CHECK(dy[n] == pc1_eval(d, y[n]));
      CHECK(s1[n] == d.d1_slope(y[n]));
      CHECK(s2[n] == d.d2_slope(y[n]));
      // masked nodes take the branch picked by the sign of s, with slopes at y
      const double expect = !mask[n]    ? pc1_dir_deriv(d, y[n], s[n])
                            : s[n] < 0.0 ? d.d1_slope(y[n]) * s[n]
                                         : d.d2_slope(y[n]) * s[n];
      CHECK(dd[n] == doctest::Approx(expect));
    }
  }
  const Field c = superpose(d, Field::constant(g, 0.4));
  CHECK(c.values.minCoeff() == c.values.maxCoeff());

  const Field ramp = Field::sample(g, [](double x, double y) { return x - 0.5 + 0.1 * y; });
  const Field dr = superpose(d, ramp);
  for (int n = 0; n < g->num_nodes(); ++n) {
    if (g->col(n) > 0) CHECK(dr[n] >= dr[n - 1]);
  }
}
