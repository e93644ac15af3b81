#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <memory>
#include <stdexcept>
#include <vector>

namespace nsoc {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Axis-aligned rectangle [x0, x0 + lx] x [y0, y0 + ly].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double lx = 1.0;
  double ly = 1.0;
};

/**
 * Uniform node grid on a rectangle.
 *
 * Nodes are stored row-major: node (i, j) with i along x and j along y has
 * index j * nx + i. Perimeter nodes are enumerated counterclockwise starting
 * at the lower-left corner, each corner exactly once.
 */
class Grid {
 public:
  Grid(int nx, int ny, const Rect& rect);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  const Rect& rect() const { return rect_; }

  int num_nodes() const { return nx_ * ny_; }
  int num_boundary() const { return static_cast<int>(perimeter_.size()); }
  int num_interior() const { return (nx_ - 2) * (ny_ - 2); }

  int index(int i, int j) const { return j * nx_ + i; }
  int col(int node) const { return node % nx_; }
  int row(int node) const { return node / nx_; }
  double x(int node) const { return rect_.x0 + col(node) * hx_; }
  double y(int node) const { return rect_.y0 + row(node) * hy_; }

  bool on_boundary(int node) const { return boundary_slot_[node] >= 0; }
  /// Node index of the k-th perimeter node.
  int perimeter_node(int k) const { return perimeter_[k]; }
  /// Perimeter position of a node, or -1 for interior nodes.
  int boundary_slot(int node) const { return boundary_slot_[node]; }
  const std::vector<int>& perimeter() const { return perimeter_; }

  /// Trapezoid (mass-lumped) quadrature weights on the nodes of the closed domain.
  const Vector& node_weights() const { return node_weights_; }
  /// Arc-length quadrature weights on the perimeter, in perimeter order.
  const Vector& boundary_weights() const { return boundary_weights_; }

  /// Outward unit normals of the edges a perimeter node belongs to (one or two).
  std::vector<std::array<double, 2>> outward_normals(int k) const;

  bool operator==(const Grid& other) const;

 private:
  int nx_;
  int ny_;
  Rect rect_;
  double hx_;
  double hy_;
  std::vector<int> perimeter_;
  std::vector<int> boundary_slot_;
  Vector node_weights_;
  Vector boundary_weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(int nx, int ny, const Rect& rect = {});

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid function on all nodes of the closed domain.
struct Field {
  GridPtr grid;
  Vector values;

  Field() = default;
  Field(GridPtr g, Vector v);
  static Field constant(GridPtr g, double c);
  template <class Fn>
  static Field sample(GridPtr g, Fn&& fn) {
    Vector v(g->num_nodes());
    for (int n = 0; n < g->num_nodes(); ++n) v[n] = fn(g->x(n), g->y(n));
    return Field(std::move(g), std::move(v));
  }

  double operator[](int n) const { return values[n]; }
  double& operator[](int n) { return values[n]; }
  int size() const { return static_cast<int>(values.size()); }
};

/// Grid function on the perimeter nodes, in perimeter order.
struct BoundaryField {
  GridPtr grid;
  Vector values;

  BoundaryField() = default;
  BoundaryField(GridPtr g, Vector v);
  static BoundaryField constant(GridPtr g, double c);
  template <class Fn>
  static BoundaryField sample(GridPtr g, Fn&& fn) {
    Vector v(g->num_boundary());
    for (int k = 0; k < g->num_boundary(); ++k) {
      const int n = g->perimeter_node(k);
      v[k] = fn(g->x(n), g->y(n));
    }
    return BoundaryField(std::move(g), std::move(v));
  }

  double operator[](int k) const { return values[k]; }
  double& operator[](int k) { return values[k]; }
  int size() const { return static_cast<int>(values.size()); }
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator-(const Field& a);
Field operator*(double s, const Field& a);
BoundaryField operator+(const BoundaryField& a, const BoundaryField& b);
BoundaryField operator-(const BoundaryField& a, const BoundaryField& b);
BoundaryField operator-(const BoundaryField& a);
BoundaryField operator*(double s, const BoundaryField& a);

void require_same_grid(const Grid& a, const Grid& b);

/**
 * Discrete Robin-Laplacian: the symmetric matrix of the bilinear form
 * (grad y, grad w)_Omega + (b y, w)_Gamma on the 5-point stencil, with the
 * Robin condition built in through ghost-node elimination and scaled by the
 * quadrature weights.
 */
struct RobinOperator {
  GridPtr grid;
  SparseMatrix matrix;     // stiffness + Robin term
  SparseMatrix stiffness;  // edge Laplacian alone; z^T K z is the discrete |grad z|^2
  BoundaryField b;
};

RobinOperator assemble_robin(GridPtr grid, const BoundaryField& b);

double inner_omega(const Field& f, const Field& g);
double inner_gamma(const BoundaryField& f, const BoundaryField& g);
double norm_omega(const Field& f);
double norm_gamma(const BoundaryField& f);
/// Discrete H^1 norm: sqrt(<z,z>_Omega + |grad_h z|^2).
double norm_h1(const RobinOperator& op, const Field& z);
double norm_max(const Field& f);

BoundaryField trace(const Field& f);
Field extend_by_zero(const BoundaryField& g);

/// Quadrature measure of the band {|y - t| <= delta}.
double level_set_measure(const Field& y, double t, double delta);

/// Nodewise mask of the band {|y - t| <= delta}.
std::vector<bool> level_set_mask(const Field& y, double t, double delta);

/// Interior 5-point Laplacian Delta_h y; zero at perimeter nodes.
Field discrete_laplacian(const Field& y);

double field_range(const Field& y);

}  // namespace nsoc
