#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace pitdn {

class GradTape;

// Handle to one scalar node on a GradTape.  Arithmetic on Var records the
// computation; GradTape::gradient replays it in reverse.
struct Var {
  GradTape* tape = nullptr;
  int32_t idx = -1;

  Var() = default;
  Var(GradTape* tp, int32_t i) : tape(tp), idx(i) {}

  double value() const;
};

inline double scalar_value(const Var& v) { return v.value(); }

// Record of a scalar computation over registered inputs, sufficient to
// produce the exact gradient of any recorded scalar with respect to those
// inputs.  Nodes have at most two parents; local partials are stored at
// record time.  Replays are sequential, so gradients of a frozen computation
// are bit-for-bit reproducible.
class GradTape {
 public:
  Var input(double v) { return make(v, -1, 0.0, -1, 0.0); }
  Var constant(double v) { return make(v, -1, 0.0, -1, 0.0); }

  Var make(double val, int32_t p0, double w0, int32_t p1, double w1) {
    nodes_.push_back(Node{val, w0, w1, p0, p1});
    return Var{this, static_cast<int32_t>(nodes_.size() - 1)};
  }

  double value(int32_t idx) const { return nodes_[idx].val; }
  std::size_t size() const { return nodes_.size(); }

  // Adjoints of the first n_inputs nodes with respect to out.
  std::vector<double> gradient(const Var& out, std::size_t n_inputs) const {
    if (out.tape != this) throw std::invalid_argument("GradTape::gradient: output from foreign tape");
    std::vector<double> adj(nodes_.size(), 0.0);
    adj[out.idx] = 1.0;
    for (int32_t i = static_cast<int32_t>(nodes_.size()) - 1; i >= 0; --i) {
      double a = adj[i];
      if (a == 0.0) continue;
      const Node& n = nodes_[i];
      if (n.p0 >= 0) adj[n.p0] += n.w0 * a;
      if (n.p1 >= 0) adj[n.p1] += n.w1 * a;
    }
    adj.resize(n_inputs);
    return adj;
  }

 private:
  struct Node {
    double val;
    double w0, w1;
    int32_t p0, p1;
  };
  std::vector<Node> nodes_;
};

inline double Var::value() const { return tape->value(idx); }

namespace detail {
inline GradTape* same_tape(const Var& a, const Var& b) {
  if (a.tape != b.tape) throw std::invalid_argument("Var arithmetic across distinct tapes");
  return a.tape;
}
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  return detail::same_tape(a, b)->make(a.value() + b.value(), a.idx, 1.0, b.idx, 1.0);
}
inline Var operator-(const Var& a, const Var& b) {
  return detail::same_tape(a, b)->make(a.value() - b.value(), a.idx, 1.0, b.idx, -1.0);
}
inline Var operator*(const Var& a, const Var& b) {
  return detail::same_tape(a, b)->make(a.value() * b.value(), a.idx, b.value(), b.idx, a.value());
}
inline Var operator/(const Var& a, const Var& b) {
  detail::same_tape(a, b);
  if (b.value() == 0.0) throw std::domain_error("Var divide: division by zero value");
  double q = a.value() / b.value();
  return a.tape->make(q, a.idx, 1.0 / b.value(), b.idx, -q / b.value());
}
inline Var operator-(const Var& a) { return a.tape->make(-a.value(), a.idx, -1.0, -1, 0.0); }

inline Var operator+(const Var& a, double c) { return a.tape->make(a.value() + c, a.idx, 1.0, -1, 0.0); }
inline Var operator+(double c, const Var& a) { return a + c; }
inline Var operator-(const Var& a, double c) { return a + (-c); }
inline Var operator-(double c, const Var& a) { return a.tape->make(c - a.value(), a.idx, -1.0, -1, 0.0); }
inline Var operator*(const Var& a, double c) { return a.tape->make(a.value() * c, a.idx, c, -1, 0.0); }
inline Var operator*(double c, const Var& a) { return a * c; }
inline Var operator/(const Var& a, double c) {
  if (c == 0.0) throw std::domain_error("Var divide: division by zero value");
  return a * (1.0 / c);
}
inline Var operator/(double c, const Var& a) {
  if (a.value() == 0.0) throw std::domain_error("Var divide: division by zero value");
  double q = c / a.value();
  return a.tape->make(q, a.idx, -q / a.value(), -1, 0.0);
}

inline Var tanh(const Var& a) {
  double th = std::tanh(a.value());
  return a.tape->make(th, a.idx, 1.0 - th * th, -1, 0.0);
}
inline Var sin(const Var& a) { return a.tape->make(std::sin(a.value()), a.idx, std::cos(a.value()), -1, 0.0); }
inline Var cos(const Var& a) { return a.tape->make(std::cos(a.value()), a.idx, -std::sin(a.value()), -1, 0.0); }
inline Var exp(const Var& a) {
  double e = std::exp(a.value());
  return a.tape->make(e, a.idx, e, -1, 0.0);
}
inline Var pow(const Var& a, double p) {
  double base = a.value();
  bool integral = p == std::floor(p);
  if (base < 0.0 && !integral)
    throw std::domain_error("Var pow: negative base with non-integer exponent");
  if (base == 0.0 && p < 1.0 && p != 0.0)
    throw std::domain_error("Var pow: zero base with singular derivative");
  return a.tape->make(std::pow(base, p), a.idx, p == 0.0 ? 0.0 : p * std::pow(base, p - 1.0), -1, 0.0);
}

// Gradient of an arbitrary scalar closure of the parameters, computed by
// recording the closure on a fresh tape.  The closure must accept
// std::span<const Var> and return Var; it may freely mix in double-valued
// constants.  The result length equals the parameter count.
template <class F>
std::vector<double> param_gradient(F&& loss, std::span<const double> params) {
  GradTape tape;
  std::vector<Var> theta;
  theta.reserve(params.size());
  for (double p : params) theta.push_back(tape.input(p));
  Var out = loss(std::span<const Var>(theta.data(), theta.size()));
  if (!std::isfinite(out.value()))
    throw std::runtime_error("param_gradient: loss evaluated to a non-finite value");
  return tape.gradient(out, params.size());
}

}  // namespace pitdn
