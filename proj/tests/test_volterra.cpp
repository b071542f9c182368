#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pitdn/jet.hpp"
#include "pitdn/volterra.hpp"

using namespace pitdn;

namespace {

constexpr double kT = 4.0;  // enclosing horizon used by most cases here

// Scalar field wrapper: only the value channel is populated.
auto scalar_field(double (*f)(double)) {
  return [f](double, double s) { return jet_const(f(s)); };
}

}  // namespace

TEST_CASE("subinterval count scales with integration length") {
  QuadratureConfig q{10};
  CHECK(quadrature_subintervals(1.0, q) == 10);
  CHECK(quadrature_subintervals(4.0, q) == 40);
  CHECK(quadrature_subintervals(0.05, q) == 1);
  CHECK(quadrature_subintervals(0.0, q) == 1);
  // 10 * 0.4 must not ceil up through floating-point excess
  CHECK(quadrature_subintervals(0.4, q) == 4);
  CHECK(quadrature_subintervals(0.7, q) == 7);
  CHECK(quadrature_subintervals(0.41, q) == 5);
}

TEST_CASE("invalid quadrature requests are rejected") {
  CHECK_THROWS_AS((void)quadrature_subintervals(1.0, QuadratureConfig{0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)quadrature_subintervals(-0.1, QuadratureConfig{10}),
                  std::domain_error);
}

TEST_CASE("weights form the composite trapezoid pattern and sum to t") {
  QuadratureConfig q{10};
  const double t = 2.7;
  QuadratureRule rule = quadrature_nodes(t, q);
  const int k = rule.n_subintervals;
  REQUIRE(k == 27);
  REQUIRE(rule.nodes.size() == static_cast<std::size_t>(k + 1));
  const double h = t / k;
  CHECK(rule.nodes.front() == 0.0);
  CHECK(rule.nodes.back() == t);
  CHECK(rule.weights.front() == 0.5 * h);
  CHECK(rule.weights.back() == 0.5 * h);
  for (int m = 1; m < k; ++m) CHECK(rule.weights[m] == h);
  double sum = 0.0;
  for (double w : rule.weights) sum += w;
  CHECK(sum == doctest::Approx(t).epsilon(1e-15));
}

TEST_CASE("at t = 0 every weight vanishes") {
  QuadratureRule rule = quadrature_nodes(0.0, QuadratureConfig{10});
  for (double w : rule.weights) CHECK(w == 0.0);
  for (double s : rule.nodes) CHECK(s == 0.0);
}

TEST_CASE("trapezoid value of the sine integral at density 10") {
  // composite trapezoid of sin over [0,1] with K = 10 panels, computed
  // independently: 0.4593145488579765; the true integral is 1 - cos(1).
  QuadratureConfig q{10};
  Jet2 u0 = jet_const(0.0);
  auto v = scalar_field(+[](double s) { return std::sin(s); });
  Jet2 u = reconstruct1<double>(v, u0, 0.0, 1.0, q, kT);
  CHECK(u.v == doctest::Approx(0.4593145488579765).epsilon(1e-14));
  CHECK(std::abs(u.v - (1.0 - std::cos(1.0))) ==
        doctest::Approx(3.8314527388e-4).epsilon(1e-5));
}

TEST_CASE("constant and linear fields integrate exactly") {
  QuadratureConfig q{10};
  Jet2 u0 = jet_const(1.25);
  auto c = scalar_field(+[](double) { return 0.7; });
  for (double t : {0.0, 0.31, 1.0, 2.5, 4.0}) {
    Jet2 u = reconstruct1<double>(c, u0, 0.0, t, q, kT);
    CHECK(u.v == doctest::Approx(1.25 + 0.7 * t).epsilon(1e-15));
  }
  auto lin = scalar_field(+[](double s) { return 3.0 * s; });
  for (double t : {0.5, 1.0, 3.0}) {
    Jet2 u = reconstruct1<double>(lin, u0, 0.0, t, q, kT);
    CHECK(u.v == doctest::Approx(1.25 + 1.5 * t * t).epsilon(1e-14));
  }
}

TEST_CASE("reconstruction error decays at second order in the node density") {
  Jet2 u0 = jet_const(0.0);
  auto v = scalar_field(+[](double s) { return std::sin(s); });
  const double exact = 1.0 - std::cos(1.0);
  std::vector<double> errs;
  for (int mpu : {10, 20, 40, 80}) {
    Jet2 u = reconstruct1<double>(v, u0, 0.0, 1.0, QuadratureConfig{mpu}, kT);
    errs.push_back(std::abs(u.v - exact));
  }
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    double order = std::log2(errs[i] / errs[i + 1]);
    CHECK(order > 1.9);
    CHECK(order < 2.1);
  }
}

TEST_CASE("state at t = 0 is the initial state exactly, for any finite field") {
  QuadratureConfig q{10};
  Jet2 u0{0.123456789, -3.5, 0.0, 7.25, 0.0};
  auto wild = [](double x, double s) {
    return Jet2{1e12 * std::cos(3 * x + s), -4e9, 2e7, 8e11, -1e10};
  };
  Jet2 u = reconstruct1<double>(wild, u0, 0.77, 0.0, q, kT);
  CHECK(u.v == u0.v);
  CHECK(u.dx == u0.dx);
  CHECK(u.dxx == u0.dxx);
}

TEST_CASE("time channels come from the field at the endpoint, not a difference") {
  // v(x,s) = cos(x + 2s): d_t of the state is v itself, d_xt is v_x.
  QuadratureConfig q{10};
  auto v = [](double x, double s) {
    return jet_eval([](Jet2 xj, Jet2 tj) { return cos(xj + tj * 2.0); }, x, s);
  };
  const double x = 0.9, t = 1.7;
  Jet2 u = reconstruct1<double>(v, jet_const(0.0), x, t, q, kT);
  CHECK(u.dt == doctest::Approx(std::cos(x + 2 * t)).epsilon(1e-14));
  CHECK(u.dxt == doctest::Approx(-std::sin(x + 2 * t)).epsilon(1e-14));
}

TEST_CASE("repeated-integration kernel value at density 10") {
  // a(tau) = tau against kernel (t - tau) on [0,1]: the K = 10 trapezoid
  // value is 0.165 (true integral 1/6, defect 1/600 at this density).
  QuadratureConfig q{10};
  auto a = scalar_field(+[](double s) { return s; });
  Reconstruction2<double> rec =
      reconstruct2<double>(a, jet_const(0.0), jet_const(0.0), 0.0, 1.0, q, kT);
  CHECK(rec.u.v == doctest::Approx(0.165).epsilon(1e-14));
  CHECK(rec.v.v == doctest::Approx(0.5).epsilon(1e-14));  // trapezoid exact on linear
}

TEST_CASE("repeated-integration kernel error decays at second order") {
  auto a = scalar_field(+[](double s) { return std::cos(2.0 * s); });
  // integral of (1 - tau) cos(2 tau) over [0,1] = (1 - cos 2) / 4
  const double exact = (1.0 - std::cos(2.0)) / 4.0;
  std::vector<double> errs;
  for (int mpu : {10, 20, 40, 80}) {
    auto rec = reconstruct2<double>(a, jet_const(0.0), jet_const(0.0), 0.0, 1.0,
                                    QuadratureConfig{mpu}, kT);
    errs.push_back(std::abs(rec.u.v - exact));
  }
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    double order = std::log2(errs[i] / errs[i + 1]);
    CHECK(order > 1.9);
    CHECK(order < 2.1);
  }
}

TEST_CASE("constant acceleration reproduces uniform-acceleration kinematics") {
  QuadratureConfig q{10};
  const double a0 = -2.5, u0v = 0.4, v0v = 1.1;
  auto a = [&](double, double) { return jet_const(a0); };
  for (double t : {0.0, 0.3, 1.0, 2.2}) {
    auto rec = reconstruct2<double>(a, jet_const(u0v), jet_const(v0v), 0.0, t, q, kT);
    CHECK(rec.u.v == doctest::Approx(u0v + v0v * t + 0.5 * a0 * t * t).epsilon(1e-14));
    CHECK(rec.v.v == doctest::Approx(v0v + a0 * t).epsilon(1e-14));
  }
}

TEST_CASE("second-order reconstruction satisfies its own Leibniz channels") {
  // a(x,s) = sin(x) cos(s): d_t of v must equal a at the endpoint, and d_t of
  // the state must equal v.
  QuadratureConfig q{10};
  auto a = [](double x, double s) {
    return jet_eval([](Jet2 xj, Jet2 tj) { return sin(xj) * cos(tj); }, x, s);
  };
  const double x = 1.3, t = 0.8;
  auto rec = reconstruct2<double>(a, jet_const(0.2), jet_const(-0.1), x, t, q, kT);
  CHECK(rec.v.dt == doctest::Approx(std::sin(x) * std::cos(t)).epsilon(1e-14));
  CHECK(rec.v.dxt == doctest::Approx(std::cos(x) * std::cos(t)).epsilon(1e-14));
  CHECK(rec.u.dt == rec.v.v);
  CHECK(rec.u.dxt == rec.v.dx);
}

TEST_CASE("second-order state at t = 0 is exactly the initial data") {
  QuadratureConfig q{10};
  Jet2 u0{0.5, 1.5, 0.0, -2.5, 0.0};
  Jet2 v0{7.0, -1.0, 0.0, 3.0, 0.0};
  auto wild = [](double, double) { return Jet2{9e9, -1e8, 5e7, 2e10, -3e6}; };
  auto rec = reconstruct2<double>(wild, u0, v0, 0.0, 0.0, q, kT);
  CHECK(rec.u.v == u0.v);
  CHECK(rec.u.dx == u0.dx);
  CHECK(rec.u.dxx == u0.dxx);
  CHECK(rec.v.v == v0.v);
  CHECK(rec.v.dx == v0.dx);
}

TEST_CASE("reconstruction rejects times outside the horizon") {
  QuadratureConfig q{10};
  auto z = [](double, double) { return jet_const(0.0); };
  CHECK_THROWS_AS(
      (void)reconstruct1<double>(z, jet_const(0.0), 0.0, -0.01, q, 1.0),
      std::domain_error);
  CHECK_THROWS_AS(
      (void)reconstruct1<double>(z, jet_const(0.0), 0.0, 1.01, q, 1.0),
      std::domain_error);
  CHECK_THROWS_AS((void)reconstruct2<double>(z, jet_const(0.0), jet_const(0.0),
                                             0.0, 1.5, q, 1.0),
                  std::domain_error);
}

TEST_CASE("spatial channels pass under the integral sign") {
  // v(x,s) = x^2 s: state = u0 + x^2 t^2 / 2 (trapezoid exact on linear-in-s),
  // so d_x = x t^2 and d_xx = t^2.
  QuadratureConfig q{10};
  auto v = [](double x, double s) {
    return jet_eval([s](Jet2 xj, Jet2) { return sqr(xj) * s; }, x, s);
  };
  const double x = 1.5, t = 2.0;
  Jet2 u = reconstruct1<double>(v, jet_const(0.0), x, t, q, kT);
  CHECK(u.v == doctest::Approx(x * x * t * t / 2).epsilon(1e-14));
  CHECK(u.dx == doctest::Approx(2 * x * t * t / 2).epsilon(1e-14));
  CHECK(u.dxx == doctest::Approx(t * t).epsilon(1e-14));
}
