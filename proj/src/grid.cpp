#include "nsoc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nsoc {

Grid::Grid(int nx, int ny, const Rect& rect) : nx_(nx), ny_(ny), rect_(rect) {
  if (nx < 3 || ny < 3) {
    throw std::invalid_argument("grid needs at least 3 nodes per axis, got " + std::to_string(nx) +
                                "x" + std::to_string(ny));
  }
  if (!(rect.lx > 0.0) || !(rect.ly > 0.0)) {
    throw std::invalid_argument("grid rectangle needs positive side lengths");
  }
  hx_ = rect.lx / (nx - 1);
  hy_ = rect.ly / (ny - 1);

  perimeter_.reserve(2 * nx + 2 * ny - 4);
  for (int i = 0; i < nx; ++i) perimeter_.push_back(index(i, 0));
  for (int j = 1; j < ny; ++j) perimeter_.push_back(index(nx - 1, j));
  for (int i = nx - 2; i >= 0; --i) perimeter_.push_back(index(i, ny - 1));
  for (int j = ny - 2; j >= 1; --j) perimeter_.push_back(index(0, j));

  boundary_slot_.assign(num_nodes(), -1);
  for (int k = 0; k < num_boundary(); ++k) boundary_slot_[perimeter_[k]] = k;

  node_weights_.resize(num_nodes());
  for (int j = 0; j < ny; ++j) {
    const double wy = (j == 0 || j == ny - 1) ? 0.5 * hy_ : hy_;
    for (int i = 0; i < nx; ++i) {
      const double wx = (i == 0 || i == nx - 1) ? 0.5 * hx_ : hx_;
      node_weights_[index(i, j)] = wx * wy;
    }
  }

  boundary_weights_.resize(num_boundary());
  for (int k = 0; k < num_boundary(); ++k) {
    const int n = perimeter_[k];
    const int i = col(n);
    const int j = row(n);
    const bool xedge = (i == 0 || i == nx - 1);
    const bool yedge = (j == 0 || j == ny - 1);
    if (xedge && yedge) {
      boundary_weights_[k] = 0.5 * (hx_ + hy_);
    } else if (yedge) {
      boundary_weights_[k] = hx_;
    } else {
      boundary_weights_[k] = hy_;
    }
  }
}

std::vector<std::array<double, 2>> Grid::outward_normals(int k) const {
  const int n = perimeter_[k];
  const int i = col(n);
  const int j = row(n);
  std::vector<std::array<double, 2>> normals;
  if (i == 0) normals.push_back({-1.0, 0.0});
  if (i == nx_ - 1) normals.push_back({1.0, 0.0});
  if (j == 0) normals.push_back({0.0, -1.0});
  if (j == ny_ - 1) normals.push_back({0.0, 1.0});
  return normals;
}

bool Grid::operator==(const Grid& other) const {
  return nx_ == other.nx_ && ny_ == other.ny_ && rect_.x0 == other.rect_.x0 &&
         rect_.y0 == other.rect_.y0 && rect_.lx == other.rect_.lx && rect_.ly == other.rect_.ly;
}

GridPtr build_grid(int nx, int ny, const Rect& rect) {
  return std::make_shared<const Grid>(nx, ny, rect);
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (&a != &b && !(a == b)) throw GridMismatch("fields live on different grids");
}

namespace {

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

}  // namespace

Field::Field(GridPtr g, Vector v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("field without grid");
  if (values.size() != grid->num_nodes()) {
    throw std::invalid_argument("field length " + std::to_string(values.size()) +
                                " does not match grid node count " +
                                std::to_string(grid->num_nodes()));
  }
  check_finite(values, "field");
}

Field Field::constant(GridPtr g, double c) {
  const int n = g->num_nodes();
  return Field(std::move(g), Vector::Constant(n, c));
}

BoundaryField::BoundaryField(GridPtr g, Vector v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid) throw std::invalid_argument("boundary field without grid");
  if (values.size() != grid->num_boundary()) {
    throw std::invalid_argument("boundary field length " + std::to_string(values.size()) +
                                " does not match perimeter node count " +
                                std::to_string(grid->num_boundary()));
  }
  check_finite(values, "boundary field");
}

BoundaryField BoundaryField::constant(GridPtr g, double c) {
  const int n = g->num_boundary();
  return BoundaryField(std::move(g), Vector::Constant(n, c));
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(*a.grid, *b.grid);
  return Field(a.grid, a.values + b.values);
}
Field operator-(const Field& a, const Field& b) {
  require_same_grid(*a.grid, *b.grid);
  return Field(a.grid, a.values - b.values);
}
Field operator-(const Field& a) { return Field(a.grid, -a.values); }
Field operator*(double s, const Field& a) { return Field(a.grid, s * a.values); }

BoundaryField operator+(const BoundaryField& a, const BoundaryField& b) {
  require_same_grid(*a.grid, *b.grid);
  return BoundaryField(a.grid, a.values + b.values);
}
BoundaryField operator-(const BoundaryField& a, const BoundaryField& b) {
  require_same_grid(*a.grid, *b.grid);
  return BoundaryField(a.grid, a.values - b.values);
}
BoundaryField operator-(const BoundaryField& a) { return BoundaryField(a.grid, -a.values); }
BoundaryField operator*(double s, const BoundaryField& a) {
  return BoundaryField(a.grid, s * a.values);
}

RobinOperator assemble_robin(GridPtr grid, const BoundaryField& b) {
  require_same_grid(*grid, *b.grid);
  for (int k = 0; k < b.size(); ++k) {
    if (!(b[k] > 0.0)) {
      throw std::invalid_argument("Robin coefficient b must be positive on the boundary, got " +
                                  std::to_string(b[k]) + " at perimeter node " +
                                  std::to_string(k));
    }
  }
  const Grid& g = *grid;
  const int nx = g.nx();
  const int ny = g.ny();
  std::vector<Eigen::Triplet<double>> edges;
  edges.reserve(10 * g.num_nodes());
  auto add_edge = [&](int p, int q, double w) {
    edges.emplace_back(p, p, w);
    edges.emplace_back(q, q, w);
    edges.emplace_back(p, q, -w);
    edges.emplace_back(q, p, -w);
  };
  for (int j = 0; j < ny; ++j) {
    const double wy = (j == 0 || j == ny - 1) ? 0.5 * g.hy() : g.hy();
    for (int i = 0; i + 1 < nx; ++i) add_edge(g.index(i, j), g.index(i + 1, j), wy / g.hx());
  }
  for (int i = 0; i < nx; ++i) {
    const double wx = (i == 0 || i == nx - 1) ? 0.5 * g.hx() : g.hx();
    for (int j = 0; j + 1 < ny; ++j) add_edge(g.index(i, j), g.index(i, j + 1), wx / g.hy());
  }

  RobinOperator op;
  op.grid = grid;
  op.b = b;
  op.stiffness.resize(g.num_nodes(), g.num_nodes());
  op.stiffness.setFromTriplets(edges.begin(), edges.end());
  for (int k = 0; k < g.num_boundary(); ++k) {
    edges.emplace_back(g.perimeter_node(k), g.perimeter_node(k), g.boundary_weights()[k] * b[k]);
  }
  op.matrix.resize(g.num_nodes(), g.num_nodes());
  op.matrix.setFromTriplets(edges.begin(), edges.end());
  op.stiffness.makeCompressed();
  op.matrix.makeCompressed();
  return op;
}

double inner_omega(const Field& f, const Field& g) {
  require_same_grid(*f.grid, *g.grid);
  return (f.values.array() * g.values.array() * f.grid->node_weights().array()).sum();
}

double inner_gamma(const BoundaryField& f, const BoundaryField& g) {
  require_same_grid(*f.grid, *g.grid);
  return (f.values.array() * g.values.array() * f.grid->boundary_weights().array()).sum();
}

double norm_omega(const Field& f) { return std::sqrt(inner_omega(f, f)); }
double norm_gamma(const BoundaryField& f) { return std::sqrt(inner_gamma(f, f)); }

double norm_h1(const RobinOperator& op, const Field& z) {
  require_same_grid(*op.grid, *z.grid);
  const double grad2 = z.values.dot(op.stiffness * z.values);
  return std::sqrt(inner_omega(z, z) + std::max(grad2, 0.0));
}

double norm_max(const Field& f) { return f.values.size() ? f.values.cwiseAbs().maxCoeff() : 0.0; }

BoundaryField trace(const Field& f) {
  const Grid& g = *f.grid;
  Vector v(g.num_boundary());
  for (int k = 0; k < g.num_boundary(); ++k) v[k] = f[g.perimeter_node(k)];
  return BoundaryField(f.grid, std::move(v));
}

Field extend_by_zero(const BoundaryField& b) {
  const Grid& g = *b.grid;
  Vector v = Vector::Zero(g.num_nodes());
  for (int k = 0; k < g.num_boundary(); ++k) v[g.perimeter_node(k)] = b[k];
  return Field(b.grid, std::move(v));
}

double level_set_measure(const Field& y, double t, double delta) {
  const Vector& w = y.grid->node_weights();
  double m = 0.0;
  for (int n = 0; n < y.size(); ++n) {
    if (std::abs(y[n] - t) <= delta) m += w[n];
  }
  return m;
}

std::vector<bool> level_set_mask(const Field& y, double t, double delta) {
  std::vector<bool> mask(y.size());
  for (int n = 0; n < y.size(); ++n) mask[n] = std::abs(y[n] - t) <= delta;
  return mask;
}

Field discrete_laplacian(const Field& y) {
  const Grid& g = *y.grid;
  Vector lap = Vector::Zero(g.num_nodes());
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  for (int j = 1; j + 1 < g.ny(); ++j) {
    for (int i = 1; i + 1 < g.nx(); ++i) {
      const int n = g.index(i, j);
      lap[n] = (y[n - 1] - 2.0 * y[n] + y[n + 1]) * ihx2 +
               (y[n - g.nx()] - 2.0 * y[n] + y[n + g.nx()]) * ihy2;
    }
  }
  return Field(y.grid, std::move(lap));
}

double field_range(const Field& y) { return y.values.maxCoeff() - y.values.minCoeff(); }

}  // namespace nsoc
