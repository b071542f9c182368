#pragma once

#include <string>

#include "pitdn/jet.hpp"

namespace pitdn {

struct Domain1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double t_end = 1.0;
};

enum class ProblemKind { advection, burgers, klein_gordon };

// One time-dependent 1-d benchmark problem in the form
//   d_t u + N[u] = 0        (order 1)
//   d_tt u + N[u] = 0       (order 2)
// with Dirichlet boundary data g and initial state u0 (and initial velocity
// v0 for order 2).  Data accessors return plain double jets: they are fixed
// problem data, constant with respect to any trained parameters.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::advection;
  std::string name;  // "advection" | "burgers" | "klein-gordon"
  int order = 1;
  Domain1D domain;
  double c = 0.0;   // advection speed
  double nu = 0.0;  // burgers viscosity
  bool has_exact = false;

  Jet2 ic_u0(double x) const;
  Jet2 ic_v0(double x) const;  // order 2 only; zero jet otherwise
  double bc_g(double x_wall, double t) const;
  double bc_dgdt(double x_wall, double t) const;
  double source_f(double x, double t) const;
  double source_dfdt(double x, double t) const;

  // Full jet of the closed-form solution; throws for problems without one.
  Jet2 exact(double x, double t) const;
  // Second time derivative of the closed-form solution (order-2 problems).
  double exact_utt(double x, double t) const;

  // N[u0](x): the consistency target for the initial derivative field.
  // Order 1: v(x, 0) + N[u0](x) = 0; order 2: a(x, 0) + N[u0](x) = 0,
  // where N includes the source at t = 0.
  double ic_consistency_rhs(double x) const;
};

ProblemSpec advection_spec();
ProblemSpec burgers_spec();
ProblemSpec klein_gordon_spec();

// Lookup by CLI name; throws with the list of valid names on a miss.
ProblemSpec problem_by_name(const std::string& name);

// State bundle for the undifferentiated residual.  u carries value/d_x/d_xx;
// the time derivatives are explicit because producers obtain them exactly
// (reconstruction: Leibniz; direct network: jet channels).
struct StateJets {
  Jet2 u;
  double u_t = 0.0;
  double u_tt = 0.0;  // order 2 only
};

// R(x, t) = u_t + N[u] (order 1) or u_tt + N[u] (order 2).
double eval_primal_residual(const ProblemSpec& spec, const StateJets& state,
                            double x, double t);

// Time-differentiated residual r_t.  For order 1 the arguments are the
// derivative-field jet d (= v) and the reconstructed state jet u:
//   advection: r_t = d_t v + c d_x v
//   burgers:   r_t = d_t v + v d_x u + u d_x v - nu d_xx v
// For order 2, d is the acceleration jet a, u the reconstructed state and
// v the reconstructed first derivative:
//   klein-gordon: r_t = d_t a - d_xx v + 2 u v - d_t f
template <class S>
S eval_diff_residual(const ProblemSpec& spec, const Jet2T<S>& d,
                     const Jet2T<S>& u, const Jet2T<S>& v, double x, double t) {
  switch (spec.kind) {
    case ProblemKind::advection:
      return d.dt + spec.c * d.dx;
    case ProblemKind::burgers:
      return d.dt + d.v * u.dx + u.v * d.dx - spec.nu * d.dxx;
    case ProblemKind::klein_gordon:
      return d.dt - v.dxx + 2.0 * (u.v * v.v) - spec.source_dfdt(x, t);
  }
  throw std::invalid_argument("eval_diff_residual: unknown problem kind");
}

// Order-1 convenience: the first-derivative slot is unused.
template <class S>
S eval_diff_residual(const ProblemSpec& spec, const Jet2T<S>& d,
                     const Jet2T<S>& u, double x, double t) {
  return eval_diff_residual(spec, d, u, d, x, t);
}

}  // namespace pitdn
