#include "pitdn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <memory>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "pitdn/rng.hpp"

namespace pitdn {

namespace {

constexpr double kPi = std::numbers::pi;

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace

const char* method_name(Method m) { return m == Method::pitdn ? "pitdn" : "pinn"; }

Method method_by_name(const std::string& name) {
  if (name == "pitdn") return Method::pitdn;
  if (name == "pinn") return Method::pinn;
  throw std::invalid_argument("unknown method '" + name + "' (valid: pitdn, pinn)");
}

double rel_l2(std::span<const double> pred, std::span<const double> ref) {
  if (pred.size() != ref.size())
    throw std::invalid_argument("rel_l2: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - ref[i];
    num += d * d;
    den += ref[i] * ref[i];
  }
  if (den == 0.0) throw std::domain_error("rel_l2: reference field has zero norm");
  return std::sqrt(num / den);
}

double rel_linf(std::span<const double> pred, std::span<const double> ref) {
  if (pred.size() != ref.size())
    throw std::invalid_argument("rel_linf: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    num = std::max(num, std::abs(pred[i] - ref[i]));
    den = std::max(den, std::abs(ref[i]));
  }
  if (den == 0.0) throw std::domain_error("rel_linf: reference field has zero norm");
  return num / den;
}

double predict_state(const ProblemSpec& spec, Method m, MlpEval& eval,
                     std::span<const double> params, const QuadratureConfig& q,
                     double x, double t) {
  if (m == Method::pinn) return eval.forward(params, jet_x(x), jet_t(t)).v;
  auto field = [&](double xx, double ss) {
    return eval.forward(params, jet_x(xx), jet_t(ss));
  };
  if (spec.order == 1)
    return reconstruct1<double>(field, spec.ic_u0(x), x, t, q, spec.domain.t_end).v;
  return reconstruct2<double>(field, spec.ic_u0(x), spec.ic_v0(x), x, t, q,
                              spec.domain.t_end)
      .u.v;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ProblemSpec spec = problem_by_name(cfg.problem);
  validate_layer_sizes(cfg.layer_sizes);
  if (cfg.eval_nx < 1 || cfg.eval_nt < 1)
    throw std::invalid_argument("run_experiment: evaluation grid needs at least one interval per axis");

  ExperimentResult res;
  res.collocation = build_collocation(spec, cfg.n_interior, cfg.n_boundary,
                                      cfg.n_initial, cfg.seed);
  res.params = init_xavier(MlpConfig{cfg.layer_sizes, cfg.seed});

  TrainSchedule sched = cfg.schedule;
  sched.seed = cfg.seed;

  std::unique_ptr<Objective> obj;
  if (cfg.method == Method::pitdn)
    obj = std::make_unique<PitdnObjective>(spec, res.collocation, cfg.quadrature,
                                           cfg.weights, cfg.layer_sizes);
  else
    obj = std::make_unique<PinnObjective>(spec, res.collocation, cfg.weights,
                                          cfg.layer_sizes);
  res.report = train(*obj, res.params.values, sched);

  MetricsReport& m = res.metrics;
  m.problem = spec.name;
  m.method = method_name(cfg.method);
  m.seed = cfg.seed;
  m.final_loss = res.report.final_loss;
  m.termination_reason = res.report.termination_reason;
  m.adam_iters = res.report.adam_iters_used;
  m.lbfgs_iters = res.report.lbfgs_iters_used;
  m.train_seconds = res.report.wall_clock_seconds;
  m.wolfe_violations = res.report.wolfe_violations;
  m.param_count = res.params.size();

  // reference field: closed form when the problem has one, otherwise a
  // certified finite-difference solve
  GridSolution fd;
  bool have_fd = false;
  if (!spec.has_exact) {
    if (cfg.burgers_ref_nx % 4 != 0 || cfg.burgers_ref_nx < 64)
      throw std::invalid_argument("run_experiment: burgers_ref_nx must be a multiple of 4, at least 64");
    // the finest certification solve doubles as the reference
    auto solve = [&](int n) {
      GridSolution g = burgers_fd_solve(n, 0, spec.nu);
      if (n == cfg.burgers_ref_nx) fd = g;
      return g;
    };
    const int certs[] = {cfg.burgers_ref_nx / 4, cfg.burgers_ref_nx / 2, cfg.burgers_ref_nx};
    const double sample_times[] = {0.25, 0.5, 0.75, 1.0};
    m.certification = richardson_verify(solve, certs, sample_times, 1.7, 2.3);
    if (!m.certification.certified)
      throw std::runtime_error("run_experiment: finite-difference reference failed certification: " +
                               m.certification.detail);
    have_fd = true;
    m.reference_kind = "fd";
  } else {
    m.reference_kind = "exact";
  }

  const int nx = cfg.eval_nx, nt = cfg.eval_nt;
  std::vector<double> xs(nx + 1), ts(nt + 1);
  for (int i = 0; i <= nx; ++i)
    xs[i] = std::lerp(spec.domain.x_lo, spec.domain.x_hi, static_cast<double>(i) / nx);
  for (int k = 0; k <= nt; ++k)
    ts[k] = spec.domain.t_end * (static_cast<double>(k) / nt);

  MlpEval eval(cfg.layer_sizes);
  std::vector<double> pred, ref;
  pred.reserve(static_cast<std::size_t>(nx + 1) * (nt + 1));
  ref.reserve(pred.capacity());
  for (int k = 0; k <= nt; ++k)
    for (int i = 0; i <= nx; ++i) {
      pred.push_back(predict_state(spec, cfg.method, eval, res.params.values,
                                   QuadratureConfig{cfg.eval_m_per_unit_time},
                                   xs[i], ts[k]));
      ref.push_back(have_fd ? fd.interpolate(xs[i], ts[k]) : spec.exact(xs[i], ts[k]).v);
    }
  m.rel_l2 = rel_l2(pred, ref);
  m.rel_linf = rel_linf(pred, ref);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string dir = cfg.out_dir + "/";
    write_metrics_json(m, cfg, dir + "metrics.json");

    std::string hist = "iter,phase,total,pde,bc,ic\n";
    for (const HistoryEntry& e : res.report.history) {
      hist += std::to_string(e.iter);
      hist += ',';
      hist += phase_name(e.phase);
      for (double v : {e.loss.total, e.loss.pde, e.loss.bc, e.loss.ic}) {
        hist += ',';
        append_num(hist, v);
      }
      hist += '\n';
    }
    write_text(dir + "loss_history.csv", hist);

    std::string grid = "x,t,u_pred,u_ref,abs_err\n";
    grid.reserve(pred.size() * 80);
    for (int k = 0; k <= nt; ++k)
      for (int i = 0; i <= nx; ++i) {
        const std::size_t idx = static_cast<std::size_t>(k) * (nx + 1) + i;
        append_num(grid, xs[i]);
        grid += ',';
        append_num(grid, ts[k]);
        grid += ',';
        append_num(grid, pred[idx]);
        grid += ',';
        append_num(grid, ref[idx]);
        grid += ',';
        append_num(grid, std::abs(pred[idx] - ref[idx]));
        grid += '\n';
      }
    write_text(dir + "solution_grid.csv", grid);

    std::string slices = "t_slice,x,u_pred,u_ref\n";
    for (int s = 0; s <= 4; ++s) {
      const int k = static_cast<int>(std::lround(0.25 * s * nt));
      for (int i = 0; i <= nx; ++i) {
        const std::size_t idx = static_cast<std::size_t>(k) * (nx + 1) + i;
        append_num(slices, ts[k]);
        slices += ',';
        append_num(slices, xs[i]);
        slices += ',';
        append_num(slices, pred[idx]);
        slices += ',';
        append_num(slices, ref[idx]);
        slices += '\n';
      }
    }
    write_text(dir + "slices.csv", slices);

    save_checkpoint(dir + "checkpoint.bin", res.params);
    if (cfg.dump_collocation)
      dump_collocation_csv(dir + "collocation.csv", res.collocation);
  }
  return res;
}

void write_metrics_json(const MetricsReport& m, const ExperimentConfig& cfg,
                        const std::string& path) {
  nlohmann::json j = {
      {"problem", m.problem},
      {"method", m.method},
      {"seed", m.seed},
      {"rel_l2", m.rel_l2},
      {"rel_linf", m.rel_linf},
      {"final_loss",
       {{"total", m.final_loss.total},
        {"pde", m.final_loss.pde},
        {"bc", m.final_loss.bc},
        {"ic", m.final_loss.ic}}},
      {"train",
       {{"adam_iters", m.adam_iters},
        {"lbfgs_iters", m.lbfgs_iters},
        {"termination_reason", m.termination_reason},
        {"seconds", m.train_seconds},
        {"wolfe_violations", m.wolfe_violations}}},
      {"network", {{"layer_sizes", cfg.layer_sizes}, {"param_count", m.param_count}}},
      {"quadrature",
       {{"m_per_unit_time", cfg.quadrature.m_per_unit_time},
        {"eval_m_per_unit_time", cfg.eval_m_per_unit_time}}},
      {"eval_grid", {{"nx", cfg.eval_nx}, {"nt", cfg.eval_nt}}},
      {"collocation",
       {{"interior", cfg.n_interior},
        {"boundary", cfg.n_boundary},
        {"initial", cfg.n_initial}}},
  };
  nlohmann::json ref = {{"kind", m.reference_kind}};
  if (m.reference_kind == "fd") {
    ref["nx"] = cfg.burgers_ref_nx;
    ref["certified"] = m.certification.certified;
    ref["orders"] = m.certification.orders;
    ref["diffs"] = m.certification.diffs;
  }
  j["reference"] = ref;
  write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// self-checks

bool check_quadrature(std::ostream& out) {
  bool ok = true;
  auto integrate = [](auto&& f, double t, int mpu) {
    QuadratureRule r = quadrature_nodes(t, QuadratureConfig{mpu});
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
    return s;
  };

  struct SmoothCase {
    const char* name;
    double (*f)(double);
    double exact;  // integral over [0, 1]
  };
  const SmoothCase cases[] = {
      {"cos", [](double s) { return std::cos(s); }, std::sin(1.0)},
      {"exp", [](double s) { return std::exp(s); }, std::exp(1.0) - 1.0},
  };
  const int mpus[] = {5, 10, 20, 40, 80};
  for (const SmoothCase& c : cases) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(std::size(mpus));
    for (int mpu : mpus) {
      const double err = std::abs(integrate(c.f, 1.0, mpu) - c.exact);
      const double lx = std::log2(static_cast<double>(mpu)), ly = std::log2(err);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double slope = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    const bool pass = slope >= 1.8 && slope <= 2.2;
    ok = ok && pass;
    out << (pass ? "[ok]   " : "[FAIL] ") << "integrand " << c.name
        << ": observed order " << slope << " (want within [1.8, 2.2])\n";
  }

  const double lin_err = std::abs(integrate([](double s) { return 2.0 * s; }, 1.0, 10) - 1.0);
  const bool lin_ok = lin_err <= 1e-14;
  ok = ok && lin_ok;
  out << (lin_ok ? "[ok]   " : "[FAIL] ") << "affine integrand exact: error "
      << lin_err << "\n";

  QuadratureRule zero = quadrature_nodes(0.0, QuadratureConfig{10});
  double wsum = 0.0;
  for (double w : zero.weights) wsum += w;
  const bool zero_ok = wsum == 0.0;
  ok = ok && zero_ok;
  out << (zero_ok ? "[ok]   " : "[FAIL] ")
      << "zero-length interval: weight sum " << wsum << "\n";
  out << "[quadrature] " << (ok ? "pass" : "FAIL") << "\n";
  return ok;
}

bool check_propagation(std::ostream& out) {
  const QuadratureConfig q{10};
  Rng rng(20250817ull);
  bool ok = true;

  auto gain = [&](auto&& dv, double x, double t) {
    QuadratureRule r = quadrature_nodes(t, q);
    double acc = 0.0, mx = 0.0;
    for (std::size_t m = 0; m < r.nodes.size(); ++m) {
      const double v = dv(x, r.nodes[m]);
      acc += r.weights[m] * v;
      mx = std::max(mx, std::abs(v));
    }
    return std::pair<double, double>(std::abs(acc), mx);
  };

  const double times[] = {0.25, 0.5, 1.0};
  double worst = 0.0;
  for (int fc = 0; fc < 50; ++fc) {
    double a[3], kx[3], w[3], ph[3];
    for (int j = 0; j < 3; ++j) {
      a[j] = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.25, 1.0);
      kx[j] = 1.0 + std::floor(rng.uniform(0.0, 4.0));
      w[j] = rng.uniform(0.0, 4.0);
      ph[j] = rng.uniform(0.0, 2.0 * kPi);
    }
    auto dv = [&](double x, double s) {
      double v = 0.0;
      for (int j = 0; j < 3; ++j) v += a[j] * std::sin(kx[j] * x + w[j] * s + ph[j]);
      return v;
    };
    for (double t : times)
      for (int i = 0; i <= 16; ++i) {
        const double x = 2.0 * kPi * i / 16.0;
        auto [num, mx] = gain(dv, x, t);
        if (mx > 1e-12) worst = std::max(worst, num / (t * mx));
      }
  }
  const bool rand_ok = worst <= 1.05;
  ok = ok && rand_ok;
  out << (rand_ok ? "[ok]   " : "[FAIL] ")
      << "random fields: worst amplification " << worst << " (bound 1.05)\n";

  auto [cnum, cmx] = gain([](double, double) { return 0.7; }, 0.3, 0.73);
  const double cratio = cnum / (0.73 * cmx);
  const bool const_ok = std::abs(cratio - 1.0) <= 1e-12;
  ok = ok && const_ok;
  out << (const_ok ? "[ok]   " : "[FAIL] ")
      << "constant field: amplification " << cratio << " (want 1 within 1e-12)\n";

  auto [znum, zmx] = gain([](double, double) { return 0.0; }, 0.3, 0.5);
  const bool zero_ok = znum == 0.0 && zmx == 0.0;
  ok = ok && zero_ok;
  out << (zero_ok ? "[ok]   " : "[FAIL] ") << "zero field: response " << znum << "\n";
  out << "[propagation] " << (ok ? "pass" : "FAIL") << "\n";
  return ok;
}

bool check_wirtinger(std::ostream& out) {
  const double T = 1.0;
  const int n = 10000;
  const double floor_ratio = kPi * kPi / (T * T);
  bool ok = true;
  for (int k = 1; k <= 5; ++k) {
    const double om = k * kPi / T;
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = T * i / n;
      const double w = (i == 0 || i == n) ? 0.5 * T / n : T / n;
      const double u = std::sin(om * t);
      const double du = om * std::cos(om * t);
      num += w * du * du;
      den += w * u * u;
    }
    const double ratio = num / den;
    const double expect = om * om;
    const bool pass = ratio >= floor_ratio * (1.0 - 1e-9) &&
                      std::abs(ratio - expect) <= 1e-3 * expect;
    ok = ok && pass;
    out << (pass ? "[ok]   " : "[FAIL] ") << "mode k=" << k
        << ": derivative/value energy ratio " << ratio << " (expect " << expect
        << ", floor " << floor_ratio << ")\n";
  }
  out << "[note]  constant mode skipped: it does not vanish at the endpoints\n";
  out << "[wirtinger] " << (ok ? "pass" : "FAIL") << "\n";
  return ok;
}

bool check_gradients(std::ostream& out) {
  bool ok = true;

  // jet channels of the network against central differences
  {
    const std::vector<int> sizes = {2, 10, 10, 10, 1};
    ParamVector p = init_xavier(MlpConfig{sizes, 7});
    MlpEval ev(sizes);
    auto val = [&](double x, double t) { return ev.forward(p.values, jet_x(x), jet_t(t)).v; };
    const double h = 1e-5;
    Rng rng(99);
    double worst1 = 0.0, worst2 = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = rng.uniform(0.0, 2.0 * kPi);
      const double t = rng.uniform(0.0, 4.0);
      const Jet2 J = ev.forward(p.values, jet_x(x), jet_t(t));
      const double fd_dx = (val(x + h, t) - val(x - h, t)) / (2.0 * h);
      const double fd_dt = (val(x, t + h) - val(x, t - h)) / (2.0 * h);
      const double fd_dxx = (val(x + h, t) - 2.0 * val(x, t) + val(x - h, t)) / (h * h);
      const double fd_dxt = (val(x + h, t + h) - val(x + h, t - h) - val(x - h, t + h) +
                             val(x - h, t - h)) /
                            (4.0 * h * h);
      worst1 = std::max(worst1, std::abs(J.dx - fd_dx) / (1.0 + std::abs(J.dx)));
      worst1 = std::max(worst1, std::abs(J.dt - fd_dt) / (1.0 + std::abs(J.dt)));
      worst2 = std::max(worst2, std::abs(J.dxx - fd_dxx) / (1.0 + std::abs(J.dxx)));
      worst2 = std::max(worst2, std::abs(J.dxt - fd_dxt) / (1.0 + std::abs(J.dxt)));
    }
    const bool pass = worst1 <= 1e-6 && worst2 <= 1e-4;
    ok = ok && pass;
    out << (pass ? "[ok]   " : "[FAIL] ")
        << "network jets vs finite differences: first-order " << worst1
        << " (tol 1e-6), second-order " << worst2 << " (tol 1e-4)\n";
  }

  // analytic parameter gradients against central differences of the loss
  const std::vector<int> sizes = {2, 10, 10, 10, 1};
  for (const char* pname : {"advection", "burgers", "klein-gordon"}) {
    ProblemSpec spec = problem_by_name(pname);
    CollocationSet col = build_collocation(spec, 8, 4, 4, 3);
    for (int mi = 0; mi < 2; ++mi) {
      const Method method = mi == 0 ? Method::pitdn : Method::pinn;
      std::unique_ptr<Objective> obj;
      std::function<double(std::span<const double>)> value;
      if (method == Method::pitdn) {
        auto o = std::make_unique<PitdnObjective>(spec, col, QuadratureConfig{},
                                                  LossWeights{}, sizes);
        auto* raw = o.get();
        value = [raw](std::span<const double> th) { return raw->value(th).total; };
        obj = std::move(o);
      } else {
        auto o = std::make_unique<PinnObjective>(spec, col, LossWeights{}, sizes);
        auto* raw = o.get();
        value = [raw](std::span<const double> th) { return raw->value(th).total; };
        obj = std::move(o);
      }
      ParamVector p = init_xavier(MlpConfig{sizes, 5});
      std::vector<double> g(p.size());
      const LossBreakdown f0 = obj->value_and_gradient(p.values, g);
      const double h = 1e-6;
      double worst = 0.0;
      for (int j = 0; j < 10; ++j) {
        const std::size_t idx = j * p.size() / 10;
        std::vector<double> th = p.values;
        th[idx] += h;
        const double fp = value(th);
        th[idx] = p.values[idx] - h;
        const double fm = value(th);
        const double fd = (fp - fm) / (2.0 * h);
        // the second slack term covers roundoff amplified by the loss scale
        const double tol = 1e-5 * (1.0 + std::abs(g[idx])) + 1e-9 * (1.0 + std::abs(f0.total));
        const double err = std::abs(g[idx] - fd);
        worst = std::max(worst, err / tol);
      }
      const bool pass = worst <= 1.0;
      ok = ok && pass;
      out << (pass ? "[ok]   " : "[FAIL] ") << pname << "/" << method_name(method)
          << ": worst gradient error " << worst << " x tolerance\n";
    }
  }
  out << "[gradients] " << (ok ? "pass" : "FAIL") << "\n";
  return ok;
}

bool check_equivalence(const std::string& checkpoint_path, const std::string& problem,
                       std::ostream& out) {
  ProblemSpec spec = problem_by_name(problem);
  ParamVector p = load_checkpoint(checkpoint_path);
  validate_layer_sizes(p.layer_sizes);

  CollocationSet col = build_collocation(spec, 5000, 500, 500, p.seed);
  PitdnObjective obj(spec, col, QuadratureConfig{}, LossWeights{}, p.layer_sizes);
  const LossBreakdown f = obj.value(p.values);
  const double thresh = 10.0 * std::sqrt(std::max(f.total, 0.0));

  const QuadratureConfig dense{100};
  MlpEval ev(p.layer_sizes);
  auto field = [&](double x, double s) { return ev.forward(p.values, jet_x(x), jet_t(s)); };
  const double T = spec.domain.t_end;

  double base = 0.0, drift = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double x =
        std::lerp(spec.domain.x_lo, spec.domain.x_hi, static_cast<double>(i) / 21.0);
    double r0 = 0.0;
    for (int k = 0; k <= 10; ++k) {
      const double t = T * k / 10.0;
      StateJets st;
      if (spec.order == 1) {
        const Jet2 u = reconstruct1<double>(field, spec.ic_u0(x), x, t, dense, T);
        st.u = u;
        st.u_t = u.dt;
      } else {
        const auto rec = reconstruct2<double>(field, spec.ic_u0(x), spec.ic_v0(x), x,
                                              t, dense, T);
        st.u = rec.u;
        st.u_t = rec.u.dt;
        st.u_tt = rec.v.dt;
      }
      const double R = eval_primal_residual(spec, st, x, t);
      if (k == 0) {
        r0 = R;
        base = std::max(base, std::abs(R));
      } else {
        drift = std::max(drift, std::abs(R - r0));
      }
    }
  }
  const bool ok = base <= thresh && drift <= thresh;
  out << "final objective " << f.total << ", threshold " << thresh << "\n";
  out << (base <= thresh ? "[ok]   " : "[FAIL] ")
      << "initial-time residual: max " << base << "\n";
  out << (drift <= thresh ? "[ok]   " : "[FAIL] ")
      << "residual drift along t: max " << drift << "\n";
  out << "[equivalence] " << (ok ? "pass" : "FAIL") << "\n";
  return ok;
}

}  // namespace pitdn
