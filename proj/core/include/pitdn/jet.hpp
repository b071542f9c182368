#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>
#include <string>

namespace pitdn {

inline double scalar_value(double s) { return s; }

// Truncated second-order Taylor jet in two independent variables.
// Channels: value, d_x, d_t, d_xx, d_xt.  Arithmetic propagates every
// channel, so after composing supported primitives each channel equals the
// true partial derivative of the composite at the seeded point.
//
// The scalar type S is double in ordinary evaluation; instantiating with a
// tape variable makes the whole jet computation reverse-differentiable with
// respect to parameters that enter it.
template <class S>
struct Jet2T {
  S v{};
  S dx{};
  S dt{};
  S dxx{};
  S dxt{};
};

using Jet2 = Jet2T<double>;

// Coordinate seeds: an x seed varies in the first independent variable only,
// a t seed in the second.
inline Jet2 jet_x(double x) { return Jet2{x, 1.0, 0.0, 0.0, 0.0}; }
inline Jet2 jet_t(double t) { return Jet2{t, 0.0, 1.0, 0.0, 0.0}; }
inline Jet2 jet_const(double c) { return Jet2{c, 0.0, 0.0, 0.0, 0.0}; }

template <class S>
Jet2T<S> operator+(const Jet2T<S>& a, const Jet2T<S>& b) {
  return {a.v + b.v, a.dx + b.dx, a.dt + b.dt, a.dxx + b.dxx, a.dxt + b.dxt};
}

template <class S>
Jet2T<S> operator-(const Jet2T<S>& a, const Jet2T<S>& b) {
  return {a.v - b.v, a.dx - b.dx, a.dt - b.dt, a.dxx - b.dxx, a.dxt - b.dxt};
}

template <class S>
Jet2T<S> operator-(const Jet2T<S>& a) {
  return {-a.v, -a.dx, -a.dt, -a.dxx, -a.dxt};
}

// Product rule through second order; d_xx picks up the 2 f'g' cross term and
// d_xt the two mixed first-order terms.
template <class S>
Jet2T<S> operator*(const Jet2T<S>& a, const Jet2T<S>& b) {
  return {a.v * b.v,
          a.dx * b.v + a.v * b.dx,
          a.dt * b.v + a.v * b.dt,
          a.dxx * b.v + a.dx * b.dx + a.dx * b.dx + a.v * b.dxx,
          a.dxt * b.v + a.dx * b.dt + a.dt * b.dx + a.v * b.dxt};
}

template <class S>
Jet2T<S> operator/(const Jet2T<S>& a, const Jet2T<S>& b) {
  if (scalar_value(b.v) == 0.0)
    throw std::domain_error("jet divide: division by zero value");
  Jet2T<S> c;
  c.v = a.v / b.v;
  c.dx = (a.dx - c.v * b.dx) / b.v;
  c.dt = (a.dt - c.v * b.dt) / b.v;
  c.dxx = (a.dxx - c.v * b.dxx - c.dx * b.dx - c.dx * b.dx) / b.v;
  c.dxt = (a.dxt - c.dx * b.dt - c.dt * b.dx - c.v * b.dxt) / b.v;
  return c;
}

// Scalar (parameter-typed) mixes.
template <class S>
Jet2T<S> operator*(const Jet2T<S>& a, const S& s) {
  return {a.v * s, a.dx * s, a.dt * s, a.dxx * s, a.dxt * s};
}
template <class S>
Jet2T<S> operator*(const S& s, const Jet2T<S>& a) { return a * s; }
template <class S>
Jet2T<S> operator+(const Jet2T<S>& a, const S& s) {
  Jet2T<S> c = a;
  c.v = a.v + s;
  return c;
}
template <class S>
Jet2T<S> operator+(const S& s, const Jet2T<S>& a) { return a + s; }
template <class S>
Jet2T<S> operator-(const Jet2T<S>& a, const S& s) {
  Jet2T<S> c = a;
  c.v = a.v - s;
  return c;
}

// Constant (double) mixes, for scalar types other than double.
template <class S>
  requires(!std::same_as<S, double>)
Jet2T<S> operator*(const Jet2T<S>& a, double s) {
  return {a.v * s, a.dx * s, a.dt * s, a.dxx * s, a.dxt * s};
}
template <class S>
  requires(!std::same_as<S, double>)
Jet2T<S> operator*(double s, const Jet2T<S>& a) { return a * s; }
template <class S>
  requires(!std::same_as<S, double>)
Jet2T<S> operator+(const Jet2T<S>& a, double s) {
  Jet2T<S> c = a;
  c.v = a.v + s;
  return c;
}
template <class S>
  requires(!std::same_as<S, double>)
Jet2T<S> operator+(double s, const Jet2T<S>& a) { return a + s; }
template <class S>
  requires(!std::same_as<S, double>)
Jet2T<S> operator-(const Jet2T<S>& a, double s) {
  Jet2T<S> c = a;
  c.v = a.v - s;
  return c;
}

// Unary composition f(a) from the value f0 and the first two derivatives of f
// at a.v.  Second-order channels follow Faa di Bruno truncated at order two.
template <class S>
Jet2T<S> jet_chain(const Jet2T<S>& a, const S& f0, const S& f1, const S& f2) {
  return {f0,
          f1 * a.dx,
          f1 * a.dt,
          f2 * (a.dx * a.dx) + f1 * a.dxx,
          f2 * (a.dx * a.dt) + f1 * a.dxt};
}

template <class S>
Jet2T<S> tanh(const Jet2T<S>& a) {
  using std::tanh;
  S th = tanh(a.v);
  S sech2 = 1.0 - th * th;
  return jet_chain(a, th, sech2, S(-2.0 * th * sech2));
}

template <class S>
Jet2T<S> sin(const Jet2T<S>& a) {
  using std::cos;
  using std::sin;
  S s = sin(a.v);
  return jet_chain(a, s, S(cos(a.v)), S(-s));
}

template <class S>
Jet2T<S> cos(const Jet2T<S>& a) {
  using std::cos;
  using std::sin;
  S c = cos(a.v);
  return jet_chain(a, c, S(-sin(a.v)), S(-c));
}

template <class S>
Jet2T<S> exp(const Jet2T<S>& a) {
  using std::exp;
  S e = exp(a.v);
  return jet_chain(a, e, e, e);
}

// Real power with constant exponent.  Negative bases are rejected unless the
// exponent is an integer; bases at zero are rejected when a derivative
// channel would be singular.
template <class S>
Jet2T<S> pow(const Jet2T<S>& a, double p) {
  using std::pow;
  double base = scalar_value(a.v);
  bool integral = p == std::floor(p);
  if (base < 0.0 && !integral)
    throw std::domain_error("jet pow: negative base with non-integer exponent");
  if (base == 0.0 && p < 2.0 && p != 0.0 && p != 1.0)
    throw std::domain_error("jet pow: zero base with singular derivative");
  if (p == 0.0) return jet_chain(a, S(1.0), S(0.0), S(0.0));
  if (p == 1.0) return a;
  S f0 = pow(a.v, p);
  S f1 = pow(a.v, p - 1.0) * p;
  S f2 = pow(a.v, p - 2.0) * (p * (p - 1.0));
  return jet_chain(a, f0, f1, f2);
}

template <class S>
Jet2T<S> sqr(const Jet2T<S>& a) { return a * a; }

// Which channels a jet_eval caller asks for.  Evaluation seeds both
// coordinates; unrequested channels are zeroed in the result.
enum class JetChannels : unsigned {
  value = 1u,
  d_x = 2u,
  d_t = 4u,
  d_xx = 8u,
  d_xt = 16u,
  first_order = 7u,
  all = 31u,
};

constexpr bool has_channel(JetChannels req, JetChannels ch) {
  return (static_cast<unsigned>(req) & static_cast<unsigned>(ch)) != 0;
}

// Evaluate a closure built from the supported primitives at (x, t) with both
// coordinates seeded.  Requested channels of the result are the exact partial
// derivatives of the closure there.
template <class F>
Jet2 jet_eval(F&& f, double x, double t, JetChannels req = JetChannels::all) {
  Jet2 out = std::forward<F>(f)(jet_x(x), jet_t(t));
  if (!has_channel(req, JetChannels::value)) out.v = 0.0;
  if (!has_channel(req, JetChannels::d_x)) out.dx = 0.0;
  if (!has_channel(req, JetChannels::d_t)) out.dt = 0.0;
  if (!has_channel(req, JetChannels::d_xx)) out.dxx = 0.0;
  if (!has_channel(req, JetChannels::d_xt)) out.dxt = 0.0;
  return out;
}

}  // namespace pitdn
