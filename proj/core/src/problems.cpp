#include "pitdn/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pitdn {

namespace {
constexpr double kPi = std::numbers::pi;
}

Jet2 ProblemSpec::ic_u0(double x) const {
  switch (kind) {
    case ProblemKind::advection:
      return Jet2{std::sin(x), std::cos(x), 0.0, -std::sin(x), 0.0};
    case ProblemKind::burgers:
      return Jet2{-std::sin(kPi * x), -kPi * std::cos(kPi * x), 0.0,
                  kPi * kPi * std::sin(kPi * x), 0.0};
    case ProblemKind::klein_gordon:
      return Jet2{std::sin(kPi * x), kPi * std::cos(kPi * x), 0.0,
                  -kPi * kPi * std::sin(kPi * x), 0.0};
  }
  throw std::invalid_argument("ic_u0: unknown problem kind");
}

Jet2 ProblemSpec::ic_v0(double x) const {
  (void)x;
  // all three benchmarks have zero initial velocity data in the order-2 sense
  return jet_const(0.0);
}

double ProblemSpec::bc_g(double x_wall, double t) const {
  switch (kind) {
    case ProblemKind::advection:
      return std::sin(x_wall - c * t);
    case ProblemKind::burgers:
    case ProblemKind::klein_gordon:
      return 0.0;
  }
  throw std::invalid_argument("bc_g: unknown problem kind");
}

double ProblemSpec::bc_dgdt(double x_wall, double t) const {
  switch (kind) {
    case ProblemKind::advection:
      return -c * std::cos(x_wall - c * t);
    case ProblemKind::burgers:
    case ProblemKind::klein_gordon:
      return 0.0;
  }
  throw std::invalid_argument("bc_dgdt: unknown problem kind");
}

double ProblemSpec::source_f(double x, double t) const {
  if (kind != ProblemKind::klein_gordon) return 0.0;
  const double s = std::sin(kPi * x), ct = std::cos(2.0 * kPi * t);
  return -3.0 * kPi * kPi * s * ct + s * s * ct * ct;
}

double ProblemSpec::source_dfdt(double x, double t) const {
  if (kind != ProblemKind::klein_gordon) return 0.0;
  const double s = std::sin(kPi * x);
  const double ct = std::cos(2.0 * kPi * t), st = std::sin(2.0 * kPi * t);
  return 6.0 * kPi * kPi * kPi * s * st - 4.0 * kPi * s * s * ct * st;
}

Jet2 ProblemSpec::exact(double x, double t) const {
  switch (kind) {
    case ProblemKind::advection: {
      const double ph = x - c * t;
      return Jet2{std::sin(ph), std::cos(ph), -c * std::cos(ph), -std::sin(ph),
                  c * std::sin(ph)};
    }
    case ProblemKind::burgers:
      throw std::domain_error(
          "burgers: no closed-form solution; use the finite-difference reference");
    case ProblemKind::klein_gordon: {
      const double s = std::sin(kPi * x), cx = std::cos(kPi * x);
      const double ct = std::cos(2.0 * kPi * t), st = std::sin(2.0 * kPi * t);
      return Jet2{s * ct, kPi * cx * ct, -2.0 * kPi * s * st, -kPi * kPi * s * ct,
                  -2.0 * kPi * kPi * cx * st};
    }
  }
  throw std::invalid_argument("exact: unknown problem kind");
}

double ProblemSpec::exact_utt(double x, double t) const {
  if (kind != ProblemKind::klein_gordon)
    throw std::domain_error("exact_utt: defined for order-2 problems only");
  return -4.0 * kPi * kPi * std::sin(kPi * x) * std::cos(2.0 * kPi * t);
}

double ProblemSpec::ic_consistency_rhs(double x) const {
  const Jet2 u0 = ic_u0(x);
  switch (kind) {
    case ProblemKind::advection:
      return c * u0.dx;
    case ProblemKind::burgers:
      return u0.v * u0.dx - nu * u0.dxx;
    case ProblemKind::klein_gordon:
      return -u0.dxx + u0.v * u0.v - source_f(x, 0.0);
  }
  throw std::invalid_argument("ic_consistency_rhs: unknown problem kind");
}

double eval_primal_residual(const ProblemSpec& spec, const StateJets& state,
                            double x, double t) {
  switch (spec.kind) {
    case ProblemKind::advection:
      return state.u_t + spec.c * state.u.dx;
    case ProblemKind::burgers:
      return state.u_t + state.u.v * state.u.dx - spec.nu * state.u.dxx;
    case ProblemKind::klein_gordon:
      return state.u_tt - state.u.dxx + state.u.v * state.u.v -
             spec.source_f(x, t);
  }
  throw std::invalid_argument("eval_primal_residual: unknown problem kind");
}

ProblemSpec advection_spec() {
  ProblemSpec s;
  s.kind = ProblemKind::advection;
  s.name = "advection";
  s.order = 1;
  s.domain = {0.0, 2.0 * kPi, 4.0};
  s.c = 1.0;
  s.has_exact = true;
  return s;
}

ProblemSpec burgers_spec() {
  ProblemSpec s;
  s.kind = ProblemKind::burgers;
  s.name = "burgers";
  s.order = 1;
  s.domain = {-1.0, 1.0, 1.0};
  s.nu = 0.01 / kPi;
  s.has_exact = false;
  return s;
}

ProblemSpec klein_gordon_spec() {
  ProblemSpec s;
  s.kind = ProblemKind::klein_gordon;
  s.name = "klein-gordon";
  s.order = 2;
  s.domain = {0.0, 1.0, 1.0};
  s.has_exact = true;
  return s;
}

ProblemSpec problem_by_name(const std::string& name) {
  if (name == "advection") return advection_spec();
  if (name == "burgers") return burgers_spec();
  if (name == "klein-gordon") return klein_gordon_spec();
  throw std::invalid_argument(
      "unknown problem '" + name + "'; valid names: advection, burgers, klein-gordon");
}

}  // namespace pitdn
