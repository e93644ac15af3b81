#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nsoc;
using namespace nsoc::testing;

TEST_CASE("grid counts and spacing") {
  const GridPtr g3 = build_grid(3, 3);
  CHECK(g3->num_nodes() == 9);
  CHECK(g3->num_boundary() == 8);
  CHECK(g3->num_interior() == 1);

  const GridPtr g54 = build_grid(5, 4);
  CHECK(g54->hx() == doctest::Approx(0.25));
  CHECK(g54->hy() == doctest::Approx(1.0 / 3.0));

  const GridPtr g33 = build_grid(33, 33);
  CHECK(g33->num_nodes() == 1089);
  CHECK(g33->num_boundary() == 2 * 33 + 2 * 33 - 4);
}

TEST_CASE("grid rejects degenerate input") {
  CHECK_THROWS(build_grid(2, 5));
  CHECK_THROWS(build_grid(5, 2));
  CHECK_THROWS(build_grid(5, 5, Rect{0.0, 0.0, 0.0, 1.0}));
  CHECK_THROWS(build_grid(5, 5, Rect{0.0, 0.0, 1.0, -1.0}));
}

TEST_CASE("perimeter is counterclockwise and consistent with the slot map") {
  const GridPtr g = build_grid(5, 4, Rect{1.0, -1.0, 2.0, 3.0});
  CHECK(g->perimeter_node(0) == g->index(0, 0));
  CHECK(g->perimeter_node(1) == g->index(1, 0));
  int boundary = 0;
  for (int n = 0; n < g->num_nodes(); ++n) {
    if (g->on_boundary(n)) {
      ++boundary;
      CHECK(g->perimeter_node(g->boundary_slot(n)) == n);
    }
    const int i = g->col(n), j = g->row(n);
    CHECK(g->on_boundary(n) == (i == 0 || j == 0 || i == g->nx() - 1 || j == g->ny() - 1));
  }
  CHECK(boundary == g->num_boundary());
  // consecutive perimeter nodes are grid neighbours
  for (int k = 0; k < g->num_boundary(); ++k) {
    const int a = g->perimeter_node(k);
    const int b = g->perimeter_node((k + 1) % g->num_boundary());
    CHECK(std::abs(g->col(a) - g->col(b)) + std::abs(g->row(a) - g->row(b)) == 1);
  }
  // signed area of the perimeter polygon is positive for counterclockwise order
  double area2 = 0.0;
  for (int k = 0; k < g->num_boundary(); ++k) {
    const int a = g->perimeter_node(k);
    const int b = g->perimeter_node((k + 1) % g->num_boundary());
    area2 += g->x(a) * g->y(b) - g->x(b) * g->y(a);
  }
  CHECK(area2 / 2.0 == doctest::Approx(6.0));
}

TEST_CASE("quadrature is exact for constants and second order for smooth integrands") {
  const GridPtr g = unit_square(17);
  const Field one = Field::constant(g, 1.0);
  const BoundaryField bone = BoundaryField::constant(g, 1.0);
  CHECK(std::abs(inner_omega(one, one) - 1.0) <= 1e-12);
  CHECK(std::abs(inner_gamma(bone, bone) - 4.0) <= 1e-12);

  const GridPtr r = build_grid(9, 13, Rect{-1.0, 2.0, 3.0, 0.5});
  CHECK(inner_omega(Field::constant(r, 1.0), Field::constant(r, 1.0)) == doctest::Approx(1.5));
  CHECK(inner_gamma(BoundaryField::constant(r, 1.0), BoundaryField::constant(r, 1.0)) ==
        doctest::Approx(7.0));

  double prev = 0.0;
  for (int n : {17, 33, 65}) {
    const GridPtr gn = unit_square(n);
    const Field x = Field::sample(gn, [](double x1, double) { return x1; });
    const Field e = Field::sample(gn, [](double x1, double x2) { return std::exp(x1 + x2); });
    const double err_x = std::abs(inner_omega(x, x) - 1.0 / 3.0);
    CHECK(err_x <= 2.0 / ((n - 1) * (n - 1)));
    const double exact = std::pow(std::exp(1.0) - 1.0, 2);
    const double err = std::abs(inner_omega(e, Field::constant(gn, 1.0)) - exact);
    if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.9);
    prev = err;
  }
}

TEST_CASE("inner products are symmetric and positive") {
  std::mt19937_64 rng(1);
  const GridPtr g = unit_square(9);
  const Field f = random_field(g, rng), h = random_field(g, rng);
  CHECK(inner_omega(f, h) == doctest::Approx(inner_omega(h, f)));
  CHECK(inner_omega(f, f) > 0.0);
  const BoundaryField a = random_boundary(g, rng), b = random_boundary(g, rng);
  CHECK(inner_gamma(a, b) == doctest::Approx(inner_gamma(b, a)));
}

TEST_CASE("grid mismatch is rejected") {
  const Field a = Field::constant(unit_square(5), 1.0);
  const Field b = Field::constant(unit_square(7), 1.0);
  CHECK_THROWS_AS(inner_omega(a, b), GridMismatch);
  CHECK_THROWS_AS(a + b, GridMismatch);
}

TEST_CASE("trace and extension") {
  std::mt19937_64 rng(2);
  const GridPtr g = unit_square(11);
  const BoundaryField c = trace(Field::constant(g, 2.5));
  CHECK(c.values.cwiseAbs().maxCoeff() == 2.5);
  CHECK(c.values.minCoeff() == 2.5);

  const BoundaryField r = random_boundary(g, rng);
  const Field ext = extend_by_zero(r);
  for (int n = 0; n < g->num_nodes(); ++n) {
    if (!g->on_boundary(n)) CHECK(ext[n] == 0.0);
  }
  CHECK((trace(ext).values - r.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Robin operator") {
  const GridPtr g = unit_square(17);
  const RobinOperator A = assemble_robin(g, BoundaryField::constant(g, 1.0));

  SUBCASE("symmetric") {
    const SparseMatrix d = SparseMatrix(A.matrix.transpose()) - A.matrix;
    double amax = 0.0;
    for (int k = 0; k < A.matrix.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(A.matrix, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
    double dmax = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(d, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
    CHECK(dmax <= 1e-14 * amax);
  }

  SUBCASE("constants") {
    const double c = 1.7;
    const Vector Ac = A.matrix * Vector::Constant(g->num_nodes(), c);
    for (int n = 0; n < g->num_nodes(); ++n) {
      if (!g->on_boundary(n)) CHECK(std::abs(Ac[n]) <= 1e-12);
    }
    for (int k = 0; k < g->num_boundary(); ++k) {
      CHECK(Ac[g->perimeter_node(k)] == doctest::Approx(c * g->boundary_weights()[k]));
    }
  }

  SUBCASE("interior rows of x^2") {
    const Field y = Field::sample(g, [](double x, double) { return x * x; });
    const Vector Ay = A.matrix * y.values;
    for (int n = 0; n < g->num_nodes(); ++n) {
      if (!g->on_boundary(n)) CHECK(Ay[n] == doctest::Approx(-2.0 * g->node_weights()[n]).epsilon(1e-10));
    }
  }

  SUBCASE("positive definite") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
      const Field z = random_field(g, rng);
      CHECK(z.values.dot(A.matrix * z.values) > 0.0);
    }
  }

  CHECK_THROWS(assemble_robin(g, BoundaryField::constant(g, 0.0)));
  BoundaryField b = BoundaryField::constant(g, 1.0);
  b[5] = -0.1;
  CHECK_THROWS(assemble_robin(g, b));
}

TEST_CASE("level-set measure") {
  const GridPtr g = unit_square(21);
  CHECK(level_set_measure(Field::constant(g, 0.3), 0.3, 0.0) == doctest::Approx(1.0));
  CHECK(level_set_measure(Field::constant(g, 1.0), 0.0, 0.5) == 0.0);

  const Field y = Field::sample(g, [](double x, double) { return x - 0.5; });
  CHECK(level_set_measure(y, 0.0, g->hx() / 2.0) == doctest::Approx(g->hx()));

  std::mt19937_64 rng(4);
  const Field r = random_field(g, rng);
  double prev = 0.0;
  for (double delta : {0.0, 0.01, 0.05, 0.1, 0.3, 1.0}) {
    const double m = level_set_measure(r, 0.1, delta);
    CHECK(m >= prev);
    prev = m;
  }
}
