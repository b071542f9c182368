#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pitdn/loss.hpp"

namespace pitdn {

struct TrainSchedule {
  int adam_iters = 3000;
  double adam_lr = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int lbfgs_max_iters = 5000;
  int lbfgs_history = 20;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double grad_tol = 1e-9;
  uint64_t seed = 0;
};

enum class Phase { adam, lbfgs };

inline const char* phase_name(Phase p) { return p == Phase::adam ? "adam" : "lbfgs"; }

struct HistoryEntry {
  int iter = 0;  // global index across both phases
  Phase phase = Phase::adam;
  LossBreakdown loss;
};

struct TrainReport {
  std::vector<HistoryEntry> history;
  std::vector<double> final_params;
  LossBreakdown final_loss;
  int adam_iters_used = 0;
  int lbfgs_iters_used = 0;
  std::string termination_reason;  // grad_tol | max_iters | line_search_failure | stationary_start
  double wall_clock_seconds = 0.0;
  int wolfe_violations = 0;  // zero when every accepted step satisfied strong Wolfe
  uint64_t seed = 0;
};

// First-moment/second-moment state for Adam.
struct AdamState {
  std::vector<double> m, v;
  int step = 0;  // completed updates
  explicit AdamState(std::size_t dim) : m(dim, 0.0), v(dim, 0.0) {}
};

// One bias-corrected Adam update, in place.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grad, const TrainSchedule& s);

struct LbfgsResult {
  std::vector<LossBreakdown> history;  // loss after each accepted step
  LossBreakdown final_loss;
  int iterations = 0;
  std::string termination_reason;
  int wolfe_violations = 0;
};

// Limited-memory BFGS with a strong-Wolfe line search (sufficient decrease
// c1, curvature c2).  Every accepted step is re-checked against both Wolfe
// conditions; violations are counted in the result.  A failed line search
// terminates gracefully at the best accepted iterate.  Accepted losses are
// non-increasing.
LbfgsResult lbfgs_minimize(Objective& obj, std::span<double> params,
                           const TrainSchedule& s);

// Adam phase followed by an L-BFGS phase, with concatenated history.
TrainReport train(Objective& obj, std::span<double> params, const TrainSchedule& s);

}  // namespace pitdn
