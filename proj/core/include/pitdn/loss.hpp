#pragma once

#include <span>
#include <vector>

#include "pitdn/jet.hpp"
#include "pitdn/mlp.hpp"
#include "pitdn/problems.hpp"
#include "pitdn/sampling.hpp"
#include "pitdn/volterra.hpp"

namespace pitdn {

struct LossWeights {
  double pde = 1.0;
  double bc = 1.0;
  double ic = 10.0;
};

// Raw (unweighted) mean-square parts plus their weighted total.
struct LossBreakdown {
  double total = 0.0;
  double pde = 0.0;
  double bc = 0.0;
  double ic = 0.0;
};

inline LossBreakdown combine_parts(double pde, double bc, double ic,
                                   const LossWeights& w) {
  return {w.pde * pde + w.bc * bc + w.ic * ic, pde, bc, ic};
}

namespace detail {

template <class S>
struct SumAcc {
  bool has = false;
  S sum{};
  void add(const S& v) {
    if (!has) {
      sum = v;
      has = true;
    } else {
      sum = sum + v;
    }
  }
};

}  // namespace detail

template <class S>
struct LossParts {
  S pde{}, bc{}, ic{};
};

// Training objective of the derivative-learning method, evaluated over a
// generic field closure net(x_jet, t_jet) -> Jet2T<S>.  The network models
// the highest-order time derivative (v for order 1, the acceleration for
// order 2); the state under the nonlinear operator is reconstructed through
// the quadrature, and the whole expression stays differentiable in whatever
// parameters the closure captures when S is a tape variable.
//
//   pde: mean squared time-differentiated residual over interior points
//   bc (order 1): mean squared boundary mismatch of the field against d_t g
//   bc (order 2): mean squared boundary mismatch of the reconstructed state
//                 against g
//   ic:  mean squared consistency defect  field(x, 0) + N[u0](x)
template <class S, class Field>
LossParts<S> pitdn_loss_parts(const ProblemSpec& spec, Field&& net,
                              const CollocationSet& col,
                              const QuadratureConfig& q) {
  if (col.interior.empty() || col.boundary.empty() || col.initial_x.empty())
    throw std::invalid_argument("pitdn_loss: empty collocation subset");
  const double T = spec.domain.t_end;
  auto field = [&](double x, double s) { return net(jet_x(x), jet_t(s)); };

  detail::SumAcc<S> pde, bc, ic;
  for (const PointXT& p : col.interior) {
    Jet2T<S> d = net(jet_x(p.x), jet_t(p.t));
    S r{};
    if (spec.order == 1) {
      Jet2T<S> u = reconstruct1<S>(field, spec.ic_u0(p.x), p.x, p.t, q, T);
      r = eval_diff_residual(spec, d, u, p.x, p.t);
    } else {
      Reconstruction2<S> rec =
          reconstruct2<S>(field, spec.ic_u0(p.x), spec.ic_v0(p.x), p.x, p.t, q, T);
      r = eval_diff_residual(spec, d, rec.u, rec.v, p.x, p.t);
    }
    pde.add(r * r);
  }
  for (const PointXT& p : col.boundary) {
    if (spec.order == 1) {
      Jet2T<S> v = net(jet_x(p.x), jet_t(p.t));
      S term = v.v - spec.bc_dgdt(p.x, p.t);
      bc.add(term * term);
    } else {
      Reconstruction2<S> rec =
          reconstruct2<S>(field, spec.ic_u0(p.x), spec.ic_v0(p.x), p.x, p.t, q, T);
      S term = rec.u.v - spec.bc_g(p.x, p.t);
      bc.add(term * term);
    }
  }
  for (double x : col.initial_x) {
    Jet2T<S> v = net(jet_x(x), jet_t(0.0));
    S term = v.v + spec.ic_consistency_rhs(x);
    ic.add(term * term);
  }
  LossParts<S> out;
  out.pde = pde.sum * (1.0 / static_cast<double>(col.interior.size()));
  out.bc = bc.sum * (1.0 / static_cast<double>(col.boundary.size()));
  out.ic = ic.sum * (1.0 / static_cast<double>(col.initial_x.size()));
  return out;
}

// Undifferentiated residual of the direct (state-modelling) baseline at one
// interior point.  For order 2 the second time derivative comes from an
// extra evaluation whose first-derivative seed sits on the time coordinate,
// so the d_xx channel of that evaluation is d_tt of the network.
template <class S, class Field>
S pinn_interior_residual(const ProblemSpec& spec, Field&& net, double x, double t) {
  Jet2T<S> u = net(jet_x(x), jet_t(t));
  switch (spec.kind) {
    case ProblemKind::advection:
      return u.dt + spec.c * u.dx;
    case ProblemKind::burgers:
      return u.dt + u.v * u.dx - spec.nu * u.dxx;
    case ProblemKind::klein_gordon: {
      Jet2T<S> sw = net(jet_const(x), jet_x(t));
      return sw.dxx - u.dxx + u.v * u.v - spec.source_f(x, t);
    }
  }
  throw std::invalid_argument("pinn_interior_residual: unknown problem kind");
}

// Baseline objective: the network models the state directly.
//   pde: mean squared undifferentiated residual
//   bc:  mean squared trace mismatch against g
//   ic:  mean squared initial-state mismatch; order 2 adds the initial
//        velocity mismatch at the same points
template <class S, class Field>
LossParts<S> pinn_loss_parts(const ProblemSpec& spec, Field&& net,
                             const CollocationSet& col) {
  if (col.interior.empty() || col.boundary.empty() || col.initial_x.empty())
    throw std::invalid_argument("pinn_loss: empty collocation subset");
  detail::SumAcc<S> pde, bc, ic;
  for (const PointXT& p : col.interior) {
    S r = pinn_interior_residual<S>(spec, net, p.x, p.t);
    pde.add(r * r);
  }
  for (const PointXT& p : col.boundary) {
    Jet2T<S> u = net(jet_x(p.x), jet_t(p.t));
    S term = u.v - spec.bc_g(p.x, p.t);
    bc.add(term * term);
  }
  for (double x : col.initial_x) {
    Jet2T<S> u = net(jet_x(x), jet_t(0.0));
    S term = u.v - spec.ic_u0(x).v;
    if (spec.order == 2) {
      S term2 = u.dt - spec.ic_v0(x).v;
      ic.add(term * term + term2 * term2);
    } else {
      ic.add(term * term);
    }
  }
  LossParts<S> out;
  out.pde = pde.sum * (1.0 / static_cast<double>(col.interior.size()));
  out.bc = bc.sum * (1.0 / static_cast<double>(col.boundary.size()));
  out.ic = ic.sum * (1.0 / static_cast<double>(col.initial_x.size()));
  return out;
}

template <class Field>
LossBreakdown pitdn_loss(const ProblemSpec& spec, Field&& net,
                         const CollocationSet& col, const QuadratureConfig& q,
                         const LossWeights& w) {
  LossParts<double> p = pitdn_loss_parts<double>(spec, net, col, q);
  return combine_parts(p.pde, p.bc, p.ic, w);
}

template <class Field>
LossBreakdown pinn_baseline_loss(const ProblemSpec& spec, Field&& net,
                                 const CollocationSet& col, const LossWeights& w) {
  LossParts<double> p = pinn_loss_parts<double>(spec, net, col);
  return combine_parts(p.pde, p.bc, p.ic, w);
}

// Scalar objective with exact analytic gradient, the interface the trainers
// drive.  Gradient layout matches ParamVector.values.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::size_t dim() const = 0;
  virtual LossBreakdown value_and_gradient(std::span<const double> params,
                                           std::span<double> grad) = 0;
};

// Hand-differentiated implementation of pitdn_loss for an MLP field.  The
// reverse pass flows through the residual formulas, the quadrature
// accumulation (weights held constant) and the network jet evaluation in one
// sweep; it matches the taped gradient of pitdn_loss_parts to round-off.
class PitdnObjective final : public Objective {
 public:
  PitdnObjective(ProblemSpec spec, CollocationSet col, QuadratureConfig quad,
                 LossWeights weights, std::vector<int> layer_sizes);

  std::size_t dim() const override { return dim_; }
  LossBreakdown value_and_gradient(std::span<const double> params,
                                   std::span<double> grad) override;
  LossBreakdown value(std::span<const double> params);

 private:
  ProblemSpec spec_;
  CollocationSet col_;
  QuadratureConfig quad_;
  LossWeights weights_;
  std::vector<int> sizes_;
  std::size_t dim_;
  std::vector<MlpEval> bank_;  // one evaluator per quadrature node index
  std::vector<Jet2> jets_;     // per-node outputs of the current point
  std::vector<double> nodes_, qw_;
};

// Hand-differentiated implementation of pinn_baseline_loss for an MLP state.
class PinnObjective final : public Objective {
 public:
  PinnObjective(ProblemSpec spec, CollocationSet col, LossWeights weights,
                std::vector<int> layer_sizes);

  std::size_t dim() const override { return dim_; }
  LossBreakdown value_and_gradient(std::span<const double> params,
                                   std::span<double> grad) override;
  LossBreakdown value(std::span<const double> params);

 private:
  ProblemSpec spec_;
  CollocationSet col_;
  LossWeights weights_;
  std::vector<int> sizes_;
  std::size_t dim_;
  MlpEval eval_;
  MlpEval swap_eval_;  // order-2 second time derivative
};

}  // namespace pitdn
