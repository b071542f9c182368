#pragma once

// Finite-difference reference solutions and their certification.
//
// The viscous problem has no usable closed form at nu = 0.01/pi, so its
// reference is a conservative second-order scheme advanced with RK4 and
// certified by observed convergence order before it is trusted.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pitdn/problems.hpp"

namespace pitdn {

// Dense space-time grid of one scalar field.  values is row-major by time
// step: values[k * (nx + 1) + i] is the field at (x[i], t[k]).
struct GridSolution {
  int nx = 0;  // space intervals
  int nt = 0;  // stored time intervals (snapshots, uniformly spaced)
  double dx = 0.0, dt = 0.0;
  int solver_nt = 0;       // time steps actually marched
  double solver_dt = 0.0;
  double nu = 0.0;
  Domain1D domain;
  std::string scheme;
  std::vector<double> x, t;       // nodes, sizes nx+1 and nt+1
  std::vector<double> values;     // (nt+1) * (nx+1)

  double value(int k, int i) const { return values[static_cast<std::size_t>(k) * (nx + 1) + i]; }

  // Bilinear interpolation; throws outside the grid (small epsilon slack).
  double interpolate(double xq, double tq) const;
};

// Reference for u_t + u u_x = nu u_xx on [-1,1] x [0,1], u(x,0) = -sin(pi x),
// walls pinned to zero.  Flux form (u^2/2 central) + central diffusion, RK4
// in time.  nt == 0 picks the largest step within 0.9x the stability bound;
// an explicit nt beyond that bound throws and names the smallest admissible
// value.  At most 1000 uniformly spaced snapshots are stored (nt rounds up
// to a multiple of the snapshot count so that stored rows stay uniform);
// solver_nt records the steps actually marched.
GridSolution burgers_fd_solve(int nx, int nt, double nu);

struct RichardsonReport {
  std::vector<int> nx;               // resolutions, coarse to fine
  std::vector<double> diffs;         // sup difference of successive pairs
  std::vector<double> orders;        // log2(diffs[k] / diffs[k+1])
  bool monotone = false;             // diffs strictly decreasing
  bool at_machine_precision = false; // some pair too close to resolve an order
  bool certified = false;
  std::string detail;                // one-line summary for logs
};

// Observed-order certification from successive refinements.  solve(nx) must
// return nested grids (nx doubling along nx_list, at least three entries).
// Differences are measured at the coarsest grid's interior nodes and the
// given sample times; certification requires strictly decreasing differences
// and every resolvable order inside [order_lo, order_hi].
RichardsonReport richardson_verify(const std::function<GridSolution(int)>& solve,
                                   std::span<const int> nx_list,
                                   std::span<const double> sample_times,
                                   double order_lo, double order_hi);

// CSV with header "t,<x_0>,...,<x_nx>" and one row of values per time step,
// plus a JSON sidecar at path + ".json" carrying grid metadata.  load
// requires both files and validates them against each other.
void save_grid_csv(const GridSolution& g, const std::string& path);
GridSolution load_grid_csv(const std::string& path);

}  // namespace pitdn
