#pragma once

// Central-difference oracles used to cross-check analytic derivative
// channels.  Deliberately independent of the jet machinery: plain double
// evaluation only.

#include <functional>

namespace testsupport {

using Fn2 = std::function<double(double, double)>;

inline double fd_dx(const Fn2& f, double x, double t, double h) {
  return (f(x + h, t) - f(x - h, t)) / (2.0 * h);
}

inline double fd_dt(const Fn2& f, double x, double t, double h) {
  return (f(x, t + h) - f(x, t - h)) / (2.0 * h);
}

inline double fd_dxx(const Fn2& f, double x, double t, double h) {
  return (f(x + h, t) - 2.0 * f(x, t) + f(x - h, t)) / (h * h);
}

inline double fd_dtt(const Fn2& f, double x, double t, double h) {
  return (f(x, t + h) - 2.0 * f(x, t) + f(x, t - h)) / (h * h);
}

inline double fd_dxt(const Fn2& f, double x, double t, double h) {
  return (f(x + h, t + h) - f(x + h, t - h) - f(x - h, t + h) + f(x - h, t - h)) /
         (4.0 * h * h);
}

// Relative agreement with a guard for values near zero.
inline double rel_err(double got, double want) {
  double d = got - want;
  if (d < 0) d = -d;
  double mag = want < 0 ? -want : want;
  return d / (1.0 + mag);
}

}  // namespace testsupport
