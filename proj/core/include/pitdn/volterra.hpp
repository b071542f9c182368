#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pitdn/jet.hpp"

namespace pitdn {

// Composite-trapezoid resolution of the time integral: m_per_unit_time
// subintervals per unit of integration length, at least one.
struct QuadratureConfig {
  int m_per_unit_time = 10;
};

struct QuadratureRule {
  int n_subintervals = 0;
  std::vector<double> nodes;    // s_0 = 0 .. s_K = t
  std::vector<double> weights;  // h/2, h, ..., h, h/2; sums to t
};

inline int quadrature_subintervals(double t, const QuadratureConfig& q) {
  if (q.m_per_unit_time < 1)
    throw std::invalid_argument("quadrature: m_per_unit_time must be positive");
  if (t < 0.0) throw std::domain_error("quadrature: negative integration time");
  // the epsilon guards against ceil() rounding an exact product like 10*0.4 up
  int k = static_cast<int>(std::ceil(q.m_per_unit_time * t - 1e-12));
  return k < 1 ? 1 : k;
}

// Fills caller-owned buffers; reuses their capacity, so per-point calls do
// not allocate in steady state.
inline void quadrature_nodes_into(double t, const QuadratureConfig& q,
                                  std::vector<double>& nodes,
                                  std::vector<double>& weights) {
  const int k = quadrature_subintervals(t, q);
  const double h = t / k;
  nodes.resize(k + 1);
  weights.resize(k + 1);
  for (int m = 0; m <= k; ++m) {
    nodes[m] = t * (static_cast<double>(m) / k);
    weights[m] = (m == 0 || m == k) ? 0.5 * h : h;
  }
}

inline QuadratureRule quadrature_nodes(double t, const QuadratureConfig& q) {
  QuadratureRule rule;
  rule.n_subintervals = quadrature_subintervals(t, q);
  quadrature_nodes_into(t, q, rule.nodes, rule.weights);
  return rule;
}

namespace detail {
inline void check_reconstruct_time(double t, double t_end) {
  if (t < 0.0 || t > t_end)
    throw std::domain_error("reconstruct: time outside [0, T]");
}
}  // namespace detail

// First-order reconstruction: state(x, t) = u0(x) + integral of the
// derivative field v over [0, t].  Spatial channels (d_x, d_xx) pass under
// the integral sign; the time channels come from the field at (x, t) itself
// (Leibniz rule), never from a discretized time difference:
//   d_t  state = v(x, t)
//   d_xt state = d_x v(x, t)
// At t = 0 every weight is zero, so the state equals u0 exactly for any
// finite field.
//
// The field functor is called as v(x, s) and returns a Jet2T<S> whose
// channels are the partials of v at that point.
template <class S, class VF>
Jet2T<S> reconstruct1(VF&& v, const Jet2& u0, double x, double t,
                      const QuadratureConfig& q, double t_end) {
  detail::check_reconstruct_time(t, t_end);
  QuadratureRule rule = quadrature_nodes(t, q);
  const int k = rule.n_subintervals;
  Jet2T<S> node = v(x, rule.nodes[0]);
  Jet2T<S> acc = node * rule.weights[0];
  for (int m = 1; m <= k; ++m) {
    node = v(x, rule.nodes[m]);
    acc = acc + node * rule.weights[m];
  }
  // `node` now holds the field at s = t
  Jet2T<S> out;
  out.v = acc.v + u0.v;
  out.dx = acc.dx + u0.dx;
  out.dxx = acc.dxx + u0.dxx;
  out.dt = node.v;
  out.dxt = node.dx;
  return out;
}

template <class S>
struct Reconstruction2 {
  Jet2T<S> u;  // state
  Jet2T<S> v;  // first time derivative of the state
};

// Second-order reconstruction via the repeated-integration kernel:
//   state(x, t) = u0 + v0 t + integral of (t - tau) a(x, tau) over [0, t]
//   v(x, t)     = v0 + integral of a over [0, t]
// Exact time channels by the Leibniz rule: d_t state = v(x, t) and
// d_t v = a(x, t).
template <class S, class AF>
Reconstruction2<S> reconstruct2(AF&& a, const Jet2& u0, const Jet2& v0, double x,
                                double t, const QuadratureConfig& q, double t_end) {
  detail::check_reconstruct_time(t, t_end);
  QuadratureRule rule = quadrature_nodes(t, q);
  const int k = rule.n_subintervals;
  Jet2T<S> node = a(x, rule.nodes[0]);
  Jet2T<S> sv = node * rule.weights[0];                 // integral of a
  Jet2T<S> su = node * (rule.weights[0] * t);           // integral of (t - tau) a
  for (int m = 1; m <= k; ++m) {
    node = a(x, rule.nodes[m]);
    sv = sv + node * rule.weights[m];
    su = su + node * (rule.weights[m] * (t - rule.nodes[m]));
  }
  Reconstruction2<S> out;
  out.u.v = su.v + (u0.v + v0.v * t);
  out.u.dx = su.dx + (u0.dx + v0.dx * t);
  out.u.dxx = su.dxx + (u0.dxx + v0.dxx * t);
  out.u.dt = sv.v + v0.v;
  out.u.dxt = sv.dx + v0.dx;
  out.v.v = sv.v + v0.v;
  out.v.dx = sv.dx + v0.dx;
  out.v.dxx = sv.dxx + v0.dxx;
  out.v.dt = node.v;   // a at (x, t)
  out.v.dxt = node.dx;
  return out;
}

}  // namespace pitdn
