// Microbenchmarks for the hot paths: jet forward pass, parameter gradient,
// integral reconstruction, full loss gradients at reduced point counts, and
// the finite-difference reference.  Point counts here are smaller than the
// published training counts so a full suite run stays under a minute; costs
// scale linearly in the counts.

#include <benchmark/benchmark.h>

#include <vector>

#include "pitdn/harness.hpp"

using namespace pitdn;

namespace {

ParamVector make_params() {
  MlpConfig cfg;
  cfg.seed = 7;
  return init_xavier(cfg);
}

}  // namespace

static void BM_MlpJetForward(benchmark::State& state) {
  ParamVector p = make_params();
  Jet2 x = jet_x(0.7), t = jet_t(0.3);
  for (auto _ : state) {
    Jet2 out = mlp_forward(p, x, t);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_MlpJetForward);

static void BM_MlpForwardBackward(benchmark::State& state) {
  ParamVector p = make_params();
  MlpEval eval(p.layer_sizes);
  Jet2 x = jet_x(0.7), t = jet_t(0.3);
  Jet2 adj;
  adj.v = 1.0;
  adj.dx = 0.5;
  adj.dt = -0.25;
  adj.dxx = 0.125;
  adj.dxt = -0.0625;
  std::vector<double> grad(p.size());
  for (auto _ : state) {
    std::fill(grad.begin(), grad.end(), 0.0);
    Jet2 out = eval.forward(p.values, x, t);
    benchmark::DoNotOptimize(out);
    eval.backward(p.values, adj, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_MlpForwardBackward);

static void BM_Reconstruct1(benchmark::State& state) {
  ProblemSpec spec = problem_by_name("advection");
  ParamVector p = make_params();
  QuadratureConfig q;
  Jet2 u0 = spec.ic_u0(0.7);
  auto field = [&](double x, double s) {
    return mlp_forward(p, jet_x(x), jet_t(s));
  };
  for (auto _ : state) {
    Jet2 u = reconstruct1<double>(field, u0, 0.7, spec.domain.t_end, q,
                                  spec.domain.t_end);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_Reconstruct1);

static void BM_Reconstruct2(benchmark::State& state) {
  ProblemSpec spec = problem_by_name("klein-gordon");
  ParamVector p = make_params();
  QuadratureConfig q;
  Jet2 u0 = spec.ic_u0(0.4);
  Jet2 v0 = spec.ic_v0(0.4);
  auto field = [&](double x, double s) {
    return mlp_forward(p, jet_x(x), jet_t(s));
  };
  for (auto _ : state) {
    auto r = reconstruct2<double>(field, u0, v0, 0.4, spec.domain.t_end, q,
                                  spec.domain.t_end);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Reconstruct2);

static void bench_loss_grad(benchmark::State& state, const char* problem,
                            bool pitdn_method) {
  ProblemSpec spec = problem_by_name(problem);
  CollocationSet col = build_collocation(spec, 500, 50, 50, 3);
  ParamVector p = make_params();
  std::vector<double> grad(p.size());
  if (pitdn_method) {
    PitdnObjective obj(spec, col, QuadratureConfig{}, LossWeights{}, p.layer_sizes);
    for (auto _ : state) {
      LossBreakdown b = obj.value_and_gradient(p.values, grad);
      benchmark::DoNotOptimize(b);
    }
  } else {
    PinnObjective obj(spec, col, LossWeights{}, p.layer_sizes);
    for (auto _ : state) {
      LossBreakdown b = obj.value_and_gradient(p.values, grad);
      benchmark::DoNotOptimize(b);
    }
  }
  state.SetItemsProcessed(state.iterations() * (500 + 50 + 50));
}

static void BM_LossGradAdvection(benchmark::State& s) { bench_loss_grad(s, "advection", true); }
static void BM_LossGradBurgers(benchmark::State& s) { bench_loss_grad(s, "burgers", true); }
static void BM_LossGradKleinGordon(benchmark::State& s) { bench_loss_grad(s, "klein-gordon", true); }
static void BM_LossGradAdvectionBaseline(benchmark::State& s) { bench_loss_grad(s, "advection", false); }
BENCHMARK(BM_LossGradAdvection)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossGradBurgers)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossGradKleinGordon)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossGradAdvectionBaseline)->Unit(benchmark::kMillisecond);

static void BM_AdamStep(benchmark::State& state) {
  ParamVector p = make_params();
  AdamState st(p.size());
  TrainSchedule sched;
  std::vector<double> grad(p.size(), 1e-3);
  for (auto _ : state) {
    adam_step(st, p.values, grad, sched);
    benchmark::DoNotOptimize(p.values.data());
  }
}
BENCHMARK(BM_AdamStep);

static void BM_Collocation(benchmark::State& state) {
  ProblemSpec spec = problem_by_name("burgers");
  for (auto _ : state) {
    CollocationSet col = build_collocation(spec, 5000, 500, 500, 1);
    benchmark::DoNotOptimize(col);
  }
}
BENCHMARK(BM_Collocation)->Unit(benchmark::kMillisecond);

static void BM_BurgersFd(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0));
  for (auto _ : state) {
    GridSolution g = burgers_fd_solve(nx, 0, 0.01 / 3.14159265358979323846);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_BurgersFd)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
