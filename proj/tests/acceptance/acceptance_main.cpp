// End-to-end acceptance gate.  Trains every benchmark/method pair at the
// published hyperparameters, then prints one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria, so the suite reads as a
// single ctest entry.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "pitdn/harness.hpp"

using namespace pitdn;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  bool pass = false;
  std::string label;
  std::string evidence;
};

std::vector<Criterion> g_criteria;

void record(bool pass, const std::string& label, const std::string& evidence) {
  g_criteria.push_back({pass, label, evidence});
  std::printf("[%s] %s  (%s)\n", pass ? "PASS" : "FAIL", label.c_str(),
              evidence.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ExperimentResult run(const std::string& problem, Method m, uint64_t seed,
                     const fs::path& root) {
  ExperimentConfig cfg;
  cfg.problem = problem;
  cfg.method = m;
  cfg.seed = seed;
  fs::path out = root / (problem + "_" + method_name(m) + "_s" + std::to_string(seed));
  fs::create_directories(out);
  cfg.out_dir = out.string();
  std::printf("-- training %s/%s seed %llu ...\n", problem.c_str(), method_name(m),
              static_cast<unsigned long long>(seed));
  std::fflush(stdout);
  ExperimentResult res = run_experiment(cfg);
  std::printf("   rel_l2 %.4e  loss %.4e  %d+%d iters (%s)  %.1f s\n",
              res.metrics.rel_l2, res.metrics.final_loss.total,
              res.metrics.adam_iters, res.metrics.lbfgs_iters,
              res.metrics.termination_reason.c_str(), res.metrics.train_seconds);
  std::fflush(stdout);
  return res;
}

// Largest deviation of the reconstructed state from the initial profile at
// t = 0 over 500 x nodes.  Exactness must hold for arbitrary parameters, so
// callers pass both trained and random untrained vectors.
double ic_defect(const std::string& problem, const ParamVector& params) {
  ProblemSpec spec = problem_by_name(problem);
  MlpEval eval(params.layer_sizes);
  QuadratureConfig q{10};
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    double x = spec.domain.x_lo +
               (spec.domain.x_hi - spec.domain.x_lo) * (i + 0.5) / 500.0;
    double got = predict_state(spec, Method::pitdn, eval, params.values, q, x, 0.0);
    worst = std::max(worst, std::abs(got - spec.ic_u0(x).v));
  }
  return worst;
}

// Untrained network with weights scaled well outside the init range.
ParamVector wild_params(uint64_t seed) {
  MlpConfig cfg;
  cfg.seed = seed;
  ParamVector p = init_xavier(cfg);
  for (double& v : p.values) v = v * 7.0 + 0.1;
  return p;
}

struct SumSquares final : Objective {
  std::size_t dim() const override { return 5; }
  LossBreakdown value_and_gradient(std::span<const double> th,
                                   std::span<double> g) override {
    LossBreakdown b;
    for (std::size_t i = 0; i < th.size(); ++i) {
      b.total += th[i] * th[i];
      g[i] = 2.0 * th[i];
    }
    return b;
  }
};

struct Rosenbrock final : Objective {
  std::size_t dim() const override { return 2; }
  LossBreakdown value_and_gradient(std::span<const double> th,
                                   std::span<double> g) override {
    const double x = th[0], y = th[1];
    LossBreakdown b;
    b.total = 100.0 * (y - x * x) * (y - x * x) + (1.0 - x) * (1.0 - x);
    g[0] = -400.0 * x * (y - x * x) - 2.0 * (1.0 - x);
    g[1] = 200.0 * (y - x * x);
    return b;
  }
};

}  // namespace

int main() {
  const fs::path root = fs::current_path() / "acceptance_artifacts";
  fs::create_directories(root);
  std::printf("artifacts under %s\n", root.string().c_str());

  const double kMaxSeconds = 1800.0;

  // ---- training runs -------------------------------------------------------
  std::vector<ExperimentResult> adv_pitdn, adv_pinn;
  for (uint64_t seed : {0ull, 1ull, 2ull}) {
    adv_pitdn.push_back(run("advection", Method::pitdn, seed, root));
    adv_pinn.push_back(run("advection", Method::pinn, seed, root));
  }
  ExperimentResult burg_pitdn = run("burgers", Method::pitdn, 0, root);
  ExperimentResult burg_pinn = run("burgers", Method::pinn, 0, root);
  ExperimentResult kg_pitdn = run("klein-gordon", Method::pitdn, 0, root);
  ExperimentResult kg_pinn = run("klein-gordon", Method::pinn, 0, root);

  auto best = [](const std::vector<ExperimentResult>& v) {
    const ExperimentResult* b = &v.front();
    for (const auto& r : v)
      if (r.metrics.rel_l2 < b->metrics.rel_l2) b = &r;
    return b;
  };
  const ExperimentResult* adv_best = best(adv_pitdn);

  std::printf("\n");

  // ---- criterion 1: advection accuracy, margin, and budget -----------------
  // The ratio is taken within the winning seed's shared-collocation pair;
  // that pair is the comparison unit, both models seeing identical points.
  {
    double worst_time = 0.0;
    for (const auto& r : adv_pitdn) worst_time = std::max(worst_time, r.metrics.train_seconds);
    std::size_t bi = 0;
    for (std::size_t i = 1; i < adv_pitdn.size(); ++i)
      if (adv_pitdn[i].metrics.rel_l2 < adv_pitdn[bi].metrics.rel_l2) bi = i;
    double ratio = adv_pinn[bi].metrics.rel_l2 / adv_pitdn[bi].metrics.rel_l2;
    bool ok = adv_best->metrics.rel_l2 <= 2e-3 && ratio >= 10.0 &&
              worst_time <= kMaxSeconds;
    std::string pairs;
    for (std::size_t i = 0; i < adv_pitdn.size(); ++i) {
      pairs += " s" + std::to_string(adv_pitdn[i].metrics.seed) + " " +
               fmt(adv_pitdn[i].metrics.rel_l2) + "/" +
               fmt(adv_pinn[i].metrics.rel_l2);
    }
    record(ok,
           "advection: best-of-3 rel_l2 <= 2e-3, paired baseline 10x larger, "
           "runs within 30 min",
           "pitdn/pinn per seed:" + pairs + "; winning pair ratio " +
               fmt(ratio) + "x, slowest run " + fmt(worst_time) + " s");
  }

  // ---- criterion 2: viscous problem on a certified reference ---------------
  {
    bool cert = burg_pitdn.metrics.reference_kind == "fd" &&
                burg_pitdn.metrics.certification.certified;
    double ratio = burg_pinn.metrics.rel_l2 / burg_pitdn.metrics.rel_l2;
    bool ok = cert && burg_pitdn.metrics.rel_l2 <= 2e-2 && ratio >= 10.0;
    std::string orders;
    for (double o : burg_pitdn.metrics.certification.orders)
      orders += (orders.empty() ? "" : ",") + fmt(o);
    record(ok,
           "burgers: certified reference, rel_l2 <= 2e-2, baseline 10x larger",
           "order " + orders + ", rel_l2 " + fmt(burg_pitdn.metrics.rel_l2) +
               ", ratio " + fmt(ratio) + "x, final loss " +
               fmt(burg_pitdn.metrics.final_loss.total) + " (" +
               burg_pitdn.metrics.termination_reason + ")");
  }

  // ---- criterion 3: order-2 problem beats the baseline ---------------------
  {
    // Context for the verdict: push the EXACT acceleration field through the
    // training-density reconstruction. The resulting error is the quadrature
    // floor no optimizer can beat at that density.
    ProblemSpec kg = problem_by_name("klein-gordon");
    QuadratureConfig train_q{};
    double fl_num = 0, fl_den = 0;
    auto a_exact = [&](double xx, double s) {
      Jet2 j;
      j.v = kg.exact_utt(xx, s);
      return j;
    };
    for (int i = 0; i < 256; ++i) {
      double x = kg.domain.x_lo +
                 (kg.domain.x_hi - kg.domain.x_lo) * (i + 0.5) / 256.0;
      Jet2 u0 = kg.ic_u0(x), v0 = kg.ic_v0(x);
      for (int k = 0; k <= 100; ++k) {
        double t = kg.domain.t_end * k / 100.0;
        double got =
            reconstruct2<double>(a_exact, u0, v0, x, t, train_q, kg.domain.t_end)
                .u.v;
        double want = kg.exact(x, t).v;
        fl_num += (got - want) * (got - want);
        fl_den += want * want;
      }
    }
    double floor = std::sqrt(fl_num / fl_den);
    bool ok = kg_pitdn.metrics.rel_l2 <= 3e-2 &&
              kg_pitdn.metrics.rel_l2 < kg_pinn.metrics.rel_l2;
    record(ok, "klein-gordon: rel_l2 <= 3e-2 and below the baseline",
           "pitdn " + fmt(kg_pitdn.metrics.rel_l2) + ", pinn " +
               fmt(kg_pinn.metrics.rel_l2) + ", pitdn final loss " +
               fmt(kg_pitdn.metrics.final_loss.total) + " (" +
               kg_pitdn.metrics.termination_reason +
               "); exact-field floor at the training density " + fmt(floor));
  }

  // ---- criterion 4: initial state is exact by construction -----------------
  {
    double worst = 0.0;
    worst = std::max(worst, ic_defect("advection", adv_best->params));
    worst = std::max(worst, ic_defect("burgers", burg_pitdn.params));
    worst = std::max(worst, ic_defect("klein-gordon", kg_pitdn.params));
    for (const char* prob : {"advection", "burgers", "klein-gordon"})
      worst = std::max(worst, ic_defect(prob, wild_params(99)));
    record(worst <= 1e-12,
           "reconstruction at t = 0 reproduces u0 to 1e-12, trained or not",
           "worst defect over 500 points " + fmt(worst));
  }

  // ---- criterion 5: quadrature order ---------------------------------------
  record(check_quadrature(std::cout), "quadrature error slope in [1.8, 2.2]",
         "see [quadrature] lines above");

  // ---- criterion 6: perturbation propagation bound -------------------------
  record(check_propagation(std::cout),
         "integral perturbation gain bounded by 1.05", "see [propagation] lines");

  // ---- criterion 7: frequency lower bounds ---------------------------------
  record(check_wirtinger(std::cout), "derivative/state energy ratios for k = 1..5",
         "see [wirtinger] lines");

  // ---- criterion 8: residual equivalence on the trained checkpoint ---------
  {
    std::string ckpt =
        (root / ("advection_pitdn_s" + std::to_string(adv_best->metrics.seed)) /
         "checkpoint.bin")
            .string();
    bool ok = check_equivalence(ckpt, "advection", std::cout);
    record(ok, "trained residual is flat in t and anchored at zero",
           "see [equivalence] lines");
  }

  // ---- criterion 9: differentiation vs independent oracles -----------------
  record(check_gradients(std::cout),
         "jet channels and parameter gradients match finite differences",
         "see [gradients] lines");

  // ---- criterion 10: optimizer soundness -----------------------------------
  {
    SumSquares q;
    std::vector<double> th(5, 1.0);
    TrainSchedule s;
    LbfgsResult rq = lbfgs_minimize(q, th, s);
    double norm = 0.0;
    for (double v : th) norm += v * v;
    norm = std::sqrt(norm);
    bool quad_ok = rq.iterations <= 5 && norm <= 1e-8 && rq.wolfe_violations == 0;

    Rosenbrock rb;
    std::vector<double> th2 = {-1.2, 1.0};
    LbfgsResult rr = lbfgs_minimize(rb, th2, s);
    bool rosen_ok =
        rr.iterations <= 100 && rr.final_loss.total <= 1e-10 && rr.wolfe_violations == 0;

    int wolfe = 0;
    for (const auto& r : adv_pitdn) wolfe += r.metrics.wolfe_violations;
    for (const auto& r : adv_pinn) wolfe += r.metrics.wolfe_violations;
    wolfe += burg_pitdn.metrics.wolfe_violations + burg_pinn.metrics.wolfe_violations;
    wolfe += kg_pitdn.metrics.wolfe_violations + kg_pinn.metrics.wolfe_violations;

    bool ok = quad_ok && rosen_ok && wolfe == 0;
    record(ok, "optimizer contracts hold on closed-form problems and training",
           "quadratic " + std::to_string(rq.iterations) + " iters |theta| " +
               fmt(norm) + ", rosenbrock " + std::to_string(rr.iterations) +
               " iters f " + fmt(rr.final_loss.total) +
               ", training wolfe violations " + std::to_string(wolfe));
  }

  // ---- summary -------------------------------------------------------------
  int failed = 0;
  for (const auto& c : g_criteria) failed += !c.pass;
  std::printf("\n%d/%d criteria passed\n", static_cast<int>(g_criteria.size()) - failed,
              static_cast<int>(g_criteria.size()));
  return failed;
}
