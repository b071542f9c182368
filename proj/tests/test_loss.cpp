#include <doctest.h>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fd_oracles.hpp"
#include "pitdn/loss.hpp"
#include "pitdn/tape.hpp"

using namespace pitdn;
using testsupport::rel_err;

namespace {

constexpr double kPi = 3.14159265358979323846;

CollocationSet small_set(const ProblemSpec& spec, uint64_t seed = 11) {
  return build_collocation(spec, 40, 16, 16, seed);
}

// MLP closure over taped parameters, for the reference gradient.
struct TapedNet {
  std::span<const int> sizes;
  std::span<const Var> params;
  Jet2T<Var> operator()(const Jet2& x, const Jet2& t) const {
    return mlp_forward<Var>(sizes, params, x, t);
  }
};

// MLP closure over plain parameters.
struct PlainNet {
  std::span<const int> sizes;
  std::span<const double> params;
  Jet2 operator()(const Jet2& x, const Jet2& t) const {
    return mlp_forward<double>(sizes, params, x, t);
  }
};

}  // namespace

TEST_CASE("weighted total composes the raw parts") {
  LossWeights w;
  LossBreakdown b = combine_parts(0.25, 0.5, 0.125, w);
  CHECK(b.pde == 0.25);
  CHECK(b.bc == 0.5);
  CHECK(b.ic == 0.125);
  CHECK(b.total == doctest::Approx(0.25 + 0.5 + 10 * 0.125).epsilon(1e-15));

  LossWeights custom{2.0, 3.0, 5.0};
  CHECK(combine_parts(1.0, 1.0, 1.0, custom).total == doctest::Approx(10.0));
}

TEST_CASE("empty collocation subsets are rejected") {
  ProblemSpec spec = advection_spec();
  CollocationSet col = small_set(spec);
  QuadratureConfig q{10};
  auto zero = [](const Jet2&, const Jet2&) { return Jet2{}; };

  CollocationSet no_int = col;
  no_int.interior.clear();
  CHECK_THROWS_AS((void)pitdn_loss_parts<double>(spec, zero, no_int, q),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pinn_loss_parts<double>(spec, zero, no_int),
                  std::invalid_argument);
  CollocationSet no_ic = col;
  no_ic.initial_x.clear();
  CHECK_THROWS_AS((void)pitdn_loss_parts<double>(spec, zero, no_ic, q),
                  std::invalid_argument);
}

TEST_CASE("zero field on advection: parts reduce to data means") {
  // With the field identically zero the residual part vanishes, the boundary
  // part is the mean of (d_t g)^2 and the consistency part the mean of N[u0]^2.
  ProblemSpec spec = advection_spec();
  CollocationSet col = small_set(spec);
  QuadratureConfig q{10};
  auto zero = [](const Jet2&, const Jet2&) { return Jet2{}; };
  LossParts<double> p = pitdn_loss_parts<double>(spec, zero, col, q);

  CHECK(p.pde == 0.0);
  double bc = 0.0;
  for (const PointXT& b : col.boundary) {
    double g = spec.bc_dgdt(b.x, b.t);
    bc += g * g;
  }
  bc /= static_cast<double>(col.boundary.size());
  CHECK(p.bc == doctest::Approx(bc).epsilon(1e-14));

  double ic = 0.0;
  for (double x : col.initial_x) {
    double r = spec.ic_consistency_rhs(x);
    ic += r * r;
  }
  ic /= static_cast<double>(col.initial_x.size());
  CHECK(p.ic == doctest::Approx(ic).epsilon(1e-14));

  LossBreakdown full = pitdn_loss(spec, zero, col, q, LossWeights{});
  CHECK(full.total == doctest::Approx(p.pde + p.bc + 10 * p.ic).epsilon(1e-14));
}

TEST_CASE("zero field on klein-gordon: residual collapses to the source rate") {
  // d == 0 reconstructs u = u0, v = 0, so r_t = -d_t f and the consistency
  // defect is N[u0] = 4 pi^2 sin(pi x).
  ProblemSpec spec = klein_gordon_spec();
  CollocationSet col = small_set(spec, 13);
  QuadratureConfig q{10};
  auto zero = [](const Jet2&, const Jet2&) { return Jet2{}; };
  LossParts<double> p = pitdn_loss_parts<double>(spec, zero, col, q);

  double pde = 0.0;
  for (const PointXT& pt : col.interior) {
    double ft = spec.source_dfdt(pt.x, pt.t);
    pde += ft * ft;
  }
  pde /= static_cast<double>(col.interior.size());
  CHECK(p.pde == doctest::Approx(pde).epsilon(1e-12));

  double ic = 0.0;
  for (double x : col.initial_x) {
    double r = 4 * kPi * kPi * std::sin(kPi * x);
    ic += r * r;
  }
  ic /= static_cast<double>(col.initial_x.size());
  CHECK(p.ic == doctest::Approx(ic).epsilon(1e-12));

  // boundary: reconstructed state at the walls is u0(wall) exactly
  double bc = 0.0;
  for (const PointXT& b : col.boundary) {
    double d = spec.ic_u0(b.x).v - spec.bc_g(b.x, b.t);
    bc += d * d;
  }
  bc /= static_cast<double>(col.boundary.size());
  CHECK(p.bc == doctest::Approx(bc).epsilon(1e-12));
}

TEST_CASE("exact derivative field drives the advection objective to zero") {
  // v*(x,t) = -c cos(x - c t) built from jet arithmetic: every part of the
  // objective cancels identically, not merely to truncation error.
  ProblemSpec spec = advection_spec();
  CollocationSet col = small_set(spec, 17);
  QuadratureConfig q{10};
  const double c = spec.c;
  auto vstar = [c](const Jet2& x, const Jet2& t) {
    return cos(x - t * c) * (-c);
  };
  LossParts<double> p = pitdn_loss_parts<double>(spec, vstar, col, q);
  CHECK(std::abs(p.pde) <= 1e-28);
  CHECK(std::abs(p.bc) <= 1e-28);
  CHECK(std::abs(p.ic) <= 1e-28);
}

TEST_CASE("exact state drives the baseline objective to zero") {
  ProblemSpec adv = advection_spec();
  CollocationSet col_a = small_set(adv, 19);
  auto ustar_a = [&adv](const Jet2& x, const Jet2& t) {
    return sin(x - t * adv.c);
  };
  LossParts<double> pa = pinn_loss_parts<double>(adv, ustar_a, col_a);
  CHECK(std::abs(pa.pde) <= 1e-24);
  CHECK(std::abs(pa.bc) <= 1e-24);
  CHECK(std::abs(pa.ic) <= 1e-24);

  // order 2: the swapped-seed second derivative must line up with the source
  ProblemSpec kg = klein_gordon_spec();
  CollocationSet col_k = small_set(kg, 23);
  auto ustar_k = [](const Jet2& x, const Jet2& t) {
    return sin(x * kPi) * cos(t * (2 * kPi));
  };
  LossParts<double> pk = pinn_loss_parts<double>(kg, ustar_k, col_k);
  CHECK(std::abs(pk.pde) <= 1e-20);
  CHECK(std::abs(pk.bc) <= 1e-24);
  CHECK(std::abs(pk.ic) <= 1e-24);
}

TEST_CASE("generic and hand-differentiated objectives agree") {
  // The taped gradient of the templated loss is the reference; the streaming
  // objective must match it coordinate for coordinate, and the value must
  // match the plain templated evaluation.
  const std::vector<int> sizes = {2, 6, 5, 1};
  MlpConfig mcfg;
  mcfg.layer_sizes = sizes;
  mcfg.seed = 5;
  ParamVector theta = init_xavier(mcfg);
  QuadratureConfig q{10};
  LossWeights w;

  for (const char* name : {"advection", "burgers", "klein-gordon"}) {
    CAPTURE(name);
    ProblemSpec spec = problem_by_name(name);
    CollocationSet col = build_collocation(spec, 12, 6, 6, 3);

    // time-derivative objective
    {
      PitdnObjective obj(spec, col, q, w, sizes);
      REQUIRE(obj.dim() == theta.size());
      std::vector<double> grad(theta.size(), 0.0);
      LossBreakdown got = obj.value_and_gradient(theta.values, grad);

      PlainNet pnet{sizes, theta.values};
      LossBreakdown want = pitdn_loss(spec, pnet, col, q, w);
      CHECK(rel_err(got.total, want.total) <= 1e-13);
      CHECK(rel_err(got.pde, want.pde) <= 1e-13);
      CHECK(rel_err(got.bc, want.bc) <= 1e-13);
      CHECK(rel_err(got.ic, want.ic) <= 1e-13);

      auto taped = param_gradient(
          [&](std::span<const Var> th) {
            TapedNet net{sizes, th};
            LossParts<Var> parts = pitdn_loss_parts<Var>(spec, net, col, q);
            return w.pde * parts.pde + w.bc * parts.bc + w.ic * parts.ic;
          },
          theta.values);
      double worst = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i)
        worst = std::max(worst, rel_err(grad[i], taped[i]));
      CHECK(worst <= 1e-10);
    }

    // direct-state objective
    {
      PinnObjective obj(spec, col, w, sizes);
      std::vector<double> grad(theta.size(), 0.0);
      LossBreakdown got = obj.value_and_gradient(theta.values, grad);

      PlainNet pnet{sizes, theta.values};
      LossBreakdown want = pinn_baseline_loss(spec, pnet, col, w);
      CHECK(rel_err(got.total, want.total) <= 1e-13);

      auto taped = param_gradient(
          [&](std::span<const Var> th) {
            TapedNet net{sizes, th};
            LossParts<Var> parts = pinn_loss_parts<Var>(spec, net, col);
            return w.pde * parts.pde + w.bc * parts.bc + w.ic * parts.ic;
          },
          theta.values);
      double worst = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i)
        worst = std::max(worst, rel_err(grad[i], taped[i]));
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("objective value-only entry point matches value_and_gradient") {
  const std::vector<int> sizes = {2, 5, 1};
  MlpConfig mcfg;
  mcfg.layer_sizes = sizes;
  mcfg.seed = 9;
  ParamVector theta = init_xavier(mcfg);
  ProblemSpec spec = burgers_spec();
  CollocationSet col = build_collocation(spec, 10, 4, 4, 7);
  QuadratureConfig q{10};
  LossWeights w;

  PitdnObjective obj(spec, col, q, w, sizes);
  std::vector<double> grad(theta.size(), 0.0);
  LossBreakdown a = obj.value_and_gradient(theta.values, grad);
  LossBreakdown b = obj.value(theta.values);
  CHECK(a.total == doctest::Approx(b.total).epsilon(1e-15));
  CHECK(a.pde == doctest::Approx(b.pde).epsilon(1e-15));

  PinnObjective pobj(spec, col, w, sizes);
  LossBreakdown c = pobj.value_and_gradient(theta.values, grad);
  LossBreakdown d = pobj.value(theta.values);
  CHECK(c.total == doctest::Approx(d.total).epsilon(1e-15));
}

TEST_CASE("objective gradients survive a finite-difference spot check") {
  const std::vector<int> sizes = {2, 4, 1};
  MlpConfig mcfg;
  mcfg.layer_sizes = sizes;
  mcfg.seed = 21;
  ParamVector theta = init_xavier(mcfg);
  ProblemSpec spec = klein_gordon_spec();
  CollocationSet col = build_collocation(spec, 8, 4, 4, 5);
  QuadratureConfig q{10};
  LossWeights w;
  PitdnObjective obj(spec, col, q, w, sizes);

  std::vector<double> grad(theta.size(), 0.0);
  LossBreakdown f0 = obj.value_and_gradient(theta.values, grad);
  const double h = 1e-6;
  for (std::size_t i = 0; i < theta.size(); i += 5) {
    std::vector<double> up = theta.values, dn = theta.values;
    up[i] += h;
    dn[i] -= h;
    double fd = (obj.value(up).total - obj.value(dn).total) / (2 * h);
    double tol = 1e-5 * (1.0 + std::abs(grad[i])) + 1e-9 * (1.0 + std::abs(f0.total));
    CHECK(std::abs(grad[i] - fd) <= tol);
  }
}
