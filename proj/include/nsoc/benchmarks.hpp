#pragma once

#include "nsoc/problem.hpp"

#include <cstdint>

namespace nsoc {

/// How the boundary rows of A y + M d(y) are split between u and v.
enum class BoundarySplit {
  StateOnly,  // u = d(y) at perimeter nodes, the flux goes into v
  Balanced,   // kappa_Omega u = kappa_Gamma v at perimeter nodes
};

/// Controls whose discrete state is exactly y (up to the state solve tolerance).
ControlPair synthesize_controls(const ProblemSpec& spec, const Field& y,
                                BoundarySplit split = BoundarySplit::StateOnly);

/// y* = sin(pi x1) sin(pi x2) with analytic u = -Lap y* + d(y*), v = dy*/dnu + b y*.
struct ManufacturedCase {
  ControlPair w;
  Field y_exact;
};
ManufacturedCase manufactured_sine(const ProblemSpec& spec);

/// t_bar + scale * max(0, x1 - x0)^power * (1 + 0.5 sin(pi x2)): flat on the kink for x1 <= x0.
Field plateau_state(const GridPtr& grid, double t_bar, double x0, double scale, int power);

/// t_bar + height * max(0, 1 - |x - c|^2 / r^2)^power: on the kink outside the disk.
Field bump_state(const GridPtr& grid, double t_bar, double cx, double cy, double radius,
                 double height, int power);

/// Controls of a random state that sits on the kink over a half-plane.
ControlPair random_kink_touching(const ProblemSpec& spec, std::uint64_t seed);

/// A problem together with a control known to satisfy the optimality system.
struct Benchmark {
  ProblemSpec spec;
  ControlPair w_star;  // constructed stationary point (may be empty when unknown)
  bool has_w_star = false;
};

/// Smooth nonlinearity, no bounds.
Benchmark unconstrained_smooth_benchmark(int n);
/// max0 nonlinearity, upper bounds active on part of the domain, states off the kink.
Benchmark bound_active_benchmark(int n);
/// Smooth control group of the bound-active benchmark.
Benchmark bound_active_smooth_benchmark(int n);
/// max0 nonlinearity, no bounds; the constructed minimizer sits on the kink outside a disk
/// and dips below it inside.
Benchmark kink_active_benchmark(int n);
/// Finite bounds with targets far above the reachable states, so (u_b, v_b) is optimal.
Benchmark bound_case_benchmark(int n);

}  // namespace nsoc
