#include "pitdn/sampling.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "pitdn/rng.hpp"

namespace pitdn {

namespace {

// One stratified axis: value_i lands in stratum perm[i].
void lhs_axis(int n, double lo, double hi, Rng& rng, std::vector<double>& out) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(std::span<int>(perm));
  out.resize(n);
  for (int i = 0; i < n; ++i) {
    const double pos = (perm[i] + rng.uniform01_open()) / n;
    out[i] = lo + (hi - lo) * pos;
  }
}

}  // namespace

std::vector<std::array<double, 2>> latin_hypercube(int n, std::array<double, 2> lo,
                                                   std::array<double, 2> hi,
                                                   uint64_t seed) {
  if (n < 1) throw std::invalid_argument("latin_hypercube: need at least one point");
  Rng rng(seed);
  std::vector<double> a0, a1;
  lhs_axis(n, lo[0], hi[0], rng, a0);
  lhs_axis(n, lo[1], hi[1], rng, a1);
  std::vector<std::array<double, 2>> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = {a0[i], a1[i]};
  return pts;
}

std::vector<double> latin_hypercube_1d(int n, double lo, double hi, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("latin_hypercube_1d: need at least one point");
  Rng rng(seed);
  std::vector<double> out;
  lhs_axis(n, lo, hi, rng, out);
  return out;
}

CollocationSet build_collocation(const ProblemSpec& spec, int n_interior,
                                 int n_boundary, int n_initial, uint64_t seed) {
  if (n_interior < 1 || n_boundary < 2 || n_initial < 1)
    throw std::invalid_argument("build_collocation: counts too small");
  const Domain1D& dom = spec.domain;
  Rng seeder(seed);
  const uint64_t s_int = seeder.next_u64();
  const uint64_t s_lo = seeder.next_u64();
  const uint64_t s_hi = seeder.next_u64();
  const uint64_t s_ic = seeder.next_u64();

  CollocationSet set;
  // open stratum offsets keep x strictly inside the walls and t > 0
  auto pts = latin_hypercube(n_interior, {dom.x_lo, 0.0}, {dom.x_hi, dom.t_end}, s_int);
  set.interior.reserve(n_interior);
  for (const auto& p : pts) set.interior.push_back({p[0], p[1]});

  const int n_lo = n_boundary / 2 + n_boundary % 2;
  const int n_hi = n_boundary / 2;
  set.boundary.reserve(n_boundary);
  for (double t : latin_hypercube_1d(n_lo, 0.0, dom.t_end, s_lo))
    set.boundary.push_back({dom.x_lo, t});
  for (double t : latin_hypercube_1d(n_hi, 0.0, dom.t_end, s_hi))
    set.boundary.push_back({dom.x_hi, t});

  set.initial_x = latin_hypercube_1d(n_initial, dom.x_lo, dom.x_hi, s_ic);
  return set;
}

void dump_collocation_csv(const std::string& path, const CollocationSet& set) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("dump_collocation_csv: cannot open " + path);
  os << "x,t,kind\n";
  char buf[80];
  for (const PointXT& p : set.interior) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,interior\n", p.x, p.t);
    os << buf;
  }
  for (const PointXT& p : set.boundary) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,boundary\n", p.x, p.t);
    os << buf;
  }
  for (double x : set.initial_x) {
    std::snprintf(buf, sizeof buf, "%.17g,0,initial\n", x);
    os << buf;
  }
  if (!os) throw std::runtime_error("dump_collocation_csv: write failed for " + path);
}

}  // namespace pitdn
