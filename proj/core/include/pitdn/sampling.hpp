#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pitdn/problems.hpp"

namespace pitdn {

struct PointXT {
  double x = 0.0;
  double t = 0.0;
};

// Training point sets for one experiment.  The same set is fed verbatim to
// every method under comparison.
struct CollocationSet {
  std::vector<PointXT> interior;   // strictly inside the space-time domain
  std::vector<PointXT> boundary;   // on the two spatial walls, t in [0, T]
  std::vector<double> initial_x;   // t = 0 slice
};

// Latin hypercube sample in an axis-aligned box: each axis is cut into n
// equal strata and each stratum holds exactly one point; per-axis stratum
// order is an independent random permutation.  Offsets are drawn in the open
// unit interval, so points avoid stratum (and box) edges.  Deterministic for
// a given seed.
std::vector<std::array<double, 2>> latin_hypercube(int n,
                                                   std::array<double, 2> lo,
                                                   std::array<double, 2> hi,
                                                   uint64_t seed);

std::vector<double> latin_hypercube_1d(int n, double lo, double hi, uint64_t seed);

// Interior points by 2-d LHS over space x (0, T]; boundary points split
// evenly between the two walls (odd remainder to the lower wall) with
// 1-d LHS-stratified times; initial points 1-d LHS-stratified in x at t = 0.
CollocationSet build_collocation(const ProblemSpec& spec, int n_interior,
                                 int n_boundary, int n_initial, uint64_t seed);

// Audit dump, one row per point: x,t,kind with kind in
// {interior, boundary, initial}.  Formatting is fixed so identical sets
// produce byte-identical files.
void dump_collocation_csv(const std::string& path, const CollocationSet& set);

}  // namespace pitdn
