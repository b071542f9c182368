#pragma once

// Experiment driver.  Wires sampling, objectives and trainers together,
// evaluates the trained field against the problem's reference, and writes
// run artifacts.  Also hosts the self-checks behind `pitdn check`.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pitdn/loss.hpp"
#include "pitdn/mlp.hpp"
#include "pitdn/optim.hpp"
#include "pitdn/problems.hpp"
#include "pitdn/reference.hpp"
#include "pitdn/sampling.hpp"
#include "pitdn/volterra.hpp"

namespace pitdn {

enum class Method { pitdn, pinn };

const char* method_name(Method m);
Method method_by_name(const std::string& name);  // throws on unknown name

struct ExperimentConfig {
  std::string problem = "advection";
  Method method = Method::pitdn;
  std::vector<int> layer_sizes = {2, 10, 10, 10, 1};
  int n_interior = 5000;
  int n_boundary = 500;
  int n_initial = 500;
  QuadratureConfig quadrature;  // 10 subintervals per unit time
  LossWeights weights;          // pde 1, bc 1, ic 10
  TrainSchedule schedule;       // adam 3000 @ 1e-3, then l-bfgs
  uint64_t seed = 0;            // drives sampling and the initial weights
  int eval_nx = 256;            // evaluation grid intervals
  int eval_nt = 100;
  // Node density for reconstructing the state when *measuring* error.  Much
  // finer than the training density so the reported number is the learned
  // field's error, not the O(M^-2) quadrature floor of the training rule
  // (1.2e-3 for the advection domain at M = 10).
  int eval_m_per_unit_time = 100;
  int burgers_ref_nx = 4096;    // certified reference resolution
  std::string out_dir;          // empty: write nothing
  bool dump_collocation = true;
};

struct MetricsReport {
  std::string problem;
  std::string method;
  uint64_t seed = 0;
  double rel_l2 = 0.0;
  double rel_linf = 0.0;
  LossBreakdown final_loss;
  std::string termination_reason;
  int adam_iters = 0;
  int lbfgs_iters = 0;
  double train_seconds = 0.0;
  int wolfe_violations = 0;
  std::size_t param_count = 0;
  // reference provenance: "exact", or "fd" with the certification evidence
  std::string reference_kind;
  RichardsonReport certification;  // populated only for reference_kind "fd"
};

struct ExperimentResult {
  MetricsReport metrics;
  TrainReport report;
  ParamVector params;
  CollocationSet collocation;
};

// Relative errors of pred against ref over the same nodes.  Throws when the
// reference norm vanishes; errors are meaningless against a zero field.
double rel_l2(std::span<const double> pred, std::span<const double> ref);
double rel_linf(std::span<const double> pred, std::span<const double> ref);

// Trained-field prediction at one point: the time-derivative method
// reconstructs state through the integral operator at the caller's node
// density, the baseline reads the network directly.
double predict_state(const ProblemSpec& spec, Method m, MlpEval& eval,
                     std::span<const double> params, const QuadratureConfig& q,
                     double x, double t);

// Full pipeline: sample, initialise, train, evaluate against the reference,
// and (with out_dir set) write metrics.json, loss_history.csv,
// solution_grid.csv, slices.csv, checkpoint.bin and collocation.csv.
// The viscous problem refuses to report metrics until its finite-difference
// reference passes observed-order certification.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_metrics_json(const MetricsReport& m, const ExperimentConfig& cfg,
                        const std::string& path);

// Self-checks printed to `out`, one evidence line per case; each returns
// overall pass.
bool check_quadrature(std::ostream& out);
bool check_propagation(std::ostream& out);
bool check_wirtinger(std::ostream& out);
bool check_gradients(std::ostream& out);

// Residual-equivalence audit of a trained time-derivative checkpoint: the
// primal residual, reconstructed at high node density, must be close to
// constant along t and close to zero at t = 0, both within 10 x sqrt(final
// loss) of the checkpoint's own objective.
bool check_equivalence(const std::string& checkpoint_path,
                       const std::string& problem, std::ostream& out);

}  // namespace pitdn
