#include "pitdn/optim.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace pitdn {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

void adam_step(AdamState& st, std::span<double> params,
               std::span<const double> grad, const TrainSchedule& s) {
  if (st.m.size() != params.size() || grad.size() != params.size())
    throw std::invalid_argument("adam_step: size mismatch");
  st.step += 1;
  const double b1 = s.adam_beta1, b2 = s.adam_beta2;
  const double bc1 = 1.0 - std::pow(b1, st.step);
  const double bc2 = 1.0 - std::pow(b2, st.step);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    st.m[i] = b1 * st.m[i] + (1.0 - b1) * g;
    st.v[i] = b2 * st.v[i] + (1.0 - b2) * g * g;
    const double mhat = st.m[i] / bc1;
    const double vhat = st.v[i] / bc2;
    params[i] -= s.adam_lr * mhat / (std::sqrt(vhat) + s.adam_eps);
  }
}

namespace {

// Strong-Wolfe line search along p from x (bracket then zoom, cubic
// interpolation with bisection safeguard).  A non-finite trial value or
// slope rejects the step and shrinks the interval.  On success the buffers
// hold the accepted point, its gradient and its loss.
struct LineSearch {
  Objective& obj;
  const std::vector<double>& x;
  const std::vector<double>& p;
  double f0, dphi0, c1, c2;
  std::vector<double>& xnew;
  std::vector<double>& gnew;
  LossBreakdown fout;
  double alpha = 0.0;

  double eval(double a, double& dphi) {
    for (std::size_t i = 0; i < x.size(); ++i) xnew[i] = x[i] + a * p[i];
    fout = obj.value_and_gradient(xnew, gnew);
    dphi = dot(gnew, p);
    return fout.total;
  }

  bool armijo(double a, double fa) const { return fa <= f0 + c1 * a * dphi0; }

  bool zoom(double alo, double flo, double dlo, double ahi, double fhi, double dhi) {
    for (int j = 0; j < 50; ++j) {
      const double width = ahi - alo;
      if (std::abs(width) < 1e-18 * std::max(1.0, std::abs(alo))) return false;
      double aj = alo + 0.5 * width;  // bisection fallback
      // cubic minimizer when both ends carry finite data
      if (std::isfinite(fhi) && std::isfinite(dhi)) {
        const double d1 = dlo + dhi - 3.0 * (flo - fhi) / (alo - ahi);
        const double disc = d1 * d1 - dlo * dhi;
        if (disc >= 0.0) {
          const double d2 = (ahi > alo ? 1.0 : -1.0) * std::sqrt(disc);
          const double cand =
              ahi - (ahi - alo) * (dhi + d2 - d1) / (dhi - dlo + 2.0 * d2);
          const double lo = std::min(alo, ahi), hi = std::max(alo, ahi);
          const double margin = 0.1 * (hi - lo);
          if (std::isfinite(cand) && cand > lo + margin && cand < hi - margin)
            aj = cand;
        }
      }
      double dj = 0.0;
      const double fj = eval(aj, dj);
      const bool bad = !std::isfinite(fj) || !std::isfinite(dj);
      if (bad || !armijo(aj, fj) || fj >= flo) {
        ahi = aj;
        fhi = bad ? std::numeric_limits<double>::infinity() : fj;
        dhi = bad ? 0.0 : dj;
      } else {
        if (std::abs(dj) <= -c2 * dphi0) {
          alpha = aj;
          return true;
        }
        if (dj * (ahi - alo) >= 0.0) {
          ahi = alo;
          fhi = flo;
          dhi = dlo;
        }
        alo = aj;
        flo = fj;
        dlo = dj;
      }
    }
    return false;
  }

  bool run() {
    double a_prev = 0.0, f_prev = f0, d_prev = dphi0;
    double a = 1.0;
    for (int i = 1; i <= 30; ++i) {
      double da = 0.0;
      const double fa = eval(a, da);
      const bool bad = !std::isfinite(fa) || !std::isfinite(da);
      if (bad || !armijo(a, fa) || (i > 1 && fa >= f_prev))
        return zoom(a_prev, f_prev, d_prev,
                    a, bad ? std::numeric_limits<double>::infinity() : fa,
                    bad ? 0.0 : da);
      if (std::abs(da) <= -c2 * dphi0) {
        alpha = a;
        return true;
      }
      if (da >= 0.0) return zoom(a, fa, da, a_prev, f_prev, d_prev);
      a_prev = a;
      f_prev = fa;
      d_prev = da;
      a = std::min(2.0 * a, 1e10);
    }
    return false;
  }
};

}  // namespace

LbfgsResult lbfgs_minimize(Objective& obj, std::span<double> params,
                           const TrainSchedule& s) {
  const std::size_t n = obj.dim();
  if (params.size() != n) throw std::invalid_argument("lbfgs_minimize: size mismatch");
  LbfgsResult res;
  std::vector<double> x(params.begin(), params.end());
  std::vector<double> g(n), q(n), p(n), xnew(n), gnew(n);
  LossBreakdown f = obj.value_and_gradient(x, g);
  if (!std::isfinite(f.total) || !all_finite(g))
    throw std::runtime_error("lbfgs_minimize: non-finite loss or gradient at start");
  res.final_loss = f;
  double gnorm = nrm2(g);
  if (gnorm <= s.grad_tol) {
    res.termination_reason = "grad_tol";
    return res;
  }

  std::deque<std::vector<double>> hist_s, hist_y;
  std::deque<double> hist_rho;
  double gamma = 1.0;
  std::vector<double> alphas;

  for (int iter = 1; iter <= s.lbfgs_max_iters; ++iter) {
    // two-loop recursion: p = -H g
    q.assign(g.begin(), g.end());
    const int m = static_cast<int>(hist_s.size());
    alphas.assign(m, 0.0);
    for (int i = m - 1; i >= 0; --i) {
      alphas[i] = hist_rho[i] * dot(hist_s[i], q);
      for (std::size_t j = 0; j < n; ++j) q[j] -= alphas[i] * hist_y[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) q[j] *= gamma;
    for (int i = 0; i < m; ++i) {
      const double beta = hist_rho[i] * dot(hist_y[i], q);
      for (std::size_t j = 0; j < n; ++j) q[j] += (alphas[i] - beta) * hist_s[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) p[j] = -q[j];
    double dphi0 = dot(g, p);
    if (dphi0 >= 0.0) {
      // curvature information went stale; restart from steepest descent
      hist_s.clear();
      hist_y.clear();
      hist_rho.clear();
      gamma = 1.0;
      for (std::size_t j = 0; j < n; ++j) p[j] = -g[j];
      dphi0 = -gnorm * gnorm;
    }

    LineSearch ls{obj, x, p, f.total, dphi0, s.wolfe_c1, s.wolfe_c2, xnew, gnew, {}, 0.0};
    if (!ls.run()) {
      res.termination_reason = "line_search_failure";
      break;
    }
    const double alpha = ls.alpha;
    const LossBreakdown fnew = ls.fout;

    // re-assert strong Wolfe on the accepted step
    const double slack = 1e-12 * (1.0 + std::abs(f.total));
    if (fnew.total > f.total + s.wolfe_c1 * alpha * dphi0 + slack) ++res.wolfe_violations;
    if (std::abs(dot(gnew, p)) > s.wolfe_c2 * std::abs(dphi0) * (1.0 + 1e-12) + 1e-300)
      ++res.wolfe_violations;

    // curvature pair
    std::vector<double> sv(n), yv(n);
    for (std::size_t j = 0; j < n; ++j) {
      sv[j] = xnew[j] - x[j];
      yv[j] = gnew[j] - g[j];
    }
    const double sy = dot(sv, yv);
    if (sy > 1e-12 * nrm2(sv) * nrm2(yv)) {
      gamma = sy / dot(yv, yv);
      hist_s.push_back(std::move(sv));
      hist_y.push_back(std::move(yv));
      hist_rho.push_back(1.0 / sy);
      if (static_cast<int>(hist_s.size()) > s.lbfgs_history) {
        hist_s.pop_front();
        hist_y.pop_front();
        hist_rho.pop_front();
      }
    }

    x.swap(xnew);
    g.swap(gnew);
    f = fnew;
    gnorm = nrm2(g);
    res.history.push_back(f);
    res.final_loss = f;
    res.iterations = iter;
    if (gnorm <= s.grad_tol) {
      res.termination_reason = "grad_tol";
      break;
    }
  }
  if (res.termination_reason.empty())
    res.termination_reason = res.iterations >= s.lbfgs_max_iters ? "max_iters" : "grad_tol";
  for (std::size_t j = 0; j < n; ++j) params[j] = x[j];
  return res;
}

TrainReport train(Objective& obj, std::span<double> params, const TrainSchedule& s) {
  const auto t0 = std::chrono::steady_clock::now();
  TrainReport rep;
  rep.seed = s.seed;
  const std::size_t n = obj.dim();
  if (params.size() != n) throw std::invalid_argument("train: size mismatch");
  std::vector<double> g(n);
  AdamState st(n);
  int gi = 0;
  for (int i = 0; i < s.adam_iters; ++i) {
    const LossBreakdown f = obj.value_and_gradient(params, g);
    if (!std::isfinite(f.total) || !all_finite(g))
      throw std::runtime_error("train: non-finite loss or gradient at adam iteration " +
                               std::to_string(i));
    rep.history.push_back({gi++, Phase::adam, f});
    adam_step(st, params, g, s);
  }
  rep.adam_iters_used = s.adam_iters;

  LbfgsResult lb = lbfgs_minimize(obj, params, s);
  for (const LossBreakdown& e : lb.history) rep.history.push_back({gi++, Phase::lbfgs, e});
  rep.lbfgs_iters_used = lb.iterations;
  rep.termination_reason = lb.iterations == 0 && s.adam_iters == 0 &&
                                   lb.termination_reason == "grad_tol"
                               ? "stationary_start"
                               : lb.termination_reason;
  rep.wolfe_violations = lb.wolfe_violations;
  rep.final_loss = lb.final_loss;
  rep.final_params.assign(params.begin(), params.end());
  rep.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace pitdn
