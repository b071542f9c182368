// Command-line front end: train / reference / check / compare.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pitdn/harness.hpp"

namespace {

using namespace pitdn;

std::string read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void print_metrics(const MetricsReport& m) {
  std::printf("problem            %s\n", m.problem.c_str());
  std::printf("method             %s\n", m.method.c_str());
  std::printf("seed               %llu\n", static_cast<unsigned long long>(m.seed));
  std::printf("rel_l2             %.6e\n", m.rel_l2);
  std::printf("rel_linf           %.6e\n", m.rel_linf);
  std::printf("final loss         %.6e (pde %.3e, bc %.3e, ic %.3e)\n",
              m.final_loss.total, m.final_loss.pde, m.final_loss.bc, m.final_loss.ic);
  std::printf("iterations         %d adam + %d l-bfgs (%s)\n", m.adam_iters,
              m.lbfgs_iters, m.termination_reason.c_str());
  std::printf("train time         %.1f s\n", m.train_seconds);
  std::printf("reference          %s%s\n", m.reference_kind.c_str(),
              m.reference_kind == "fd" ? " (certified)" : "");
}

int cmd_train(ExperimentConfig cfg) {
  ExperimentResult res = run_experiment(cfg);
  print_metrics(res.metrics);
  if (!cfg.out_dir.empty()) std::printf("artifacts          %s\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_reference(int nx, int nt, const std::string& out) {
  if (nx < 16 || nx % 4 != 0)
    throw std::invalid_argument("reference: --nx must be a multiple of 4, at least 16");
  const double nu = burgers_spec().nu;
  auto solve = [nu](int n) { return burgers_fd_solve(n, 0, nu); };
  const int certs[] = {nx / 4, nx / 2, nx};
  const double sample_times[] = {0.25, 0.5, 0.75, 1.0};
  RichardsonReport rep = richardson_verify(solve, certs, sample_times, 1.7, 2.3);
  std::printf("certification      %s\n", rep.detail.c_str());
  for (std::size_t k = 0; k < rep.diffs.size(); ++k)
    std::printf("  nx %4d vs %4d: sup diff %.3e\n", rep.nx[k], rep.nx[k + 1],
                rep.diffs[k]);
  for (double p : rep.orders) std::printf("  observed order %.3f\n", p);
  if (!rep.certified) {
    std::fprintf(stderr, "error: reference failed certification\n");
    return 1;
  }
  GridSolution g = burgers_fd_solve(nx, nt, nu);
  save_grid_csv(g, out);
  std::printf("grid               %d x %d nodes, dt %.3e\n", g.nx + 1, g.nt + 1, g.dt);
  std::printf("wrote              %s (+ .json sidecar)\n", out.c_str());
  return 0;
}

int cmd_check(const std::string& which, const std::string& checkpoint,
              const std::string& problem) {
  bool ok = false;
  if (which == "quadrature") ok = check_quadrature(std::cout);
  else if (which == "propagation") ok = check_propagation(std::cout);
  else if (which == "wirtinger") ok = check_wirtinger(std::cout);
  else if (which == "gradients") ok = check_gradients(std::cout);
  else if (which == "equivalence") {
    if (checkpoint.empty())
      throw std::invalid_argument("check equivalence needs --checkpoint");
    ok = check_equivalence(checkpoint, problem, std::cout);
  }
  return ok ? 0 : 1;
}

int cmd_compare(ExperimentConfig base, const std::string& out) {
  namespace fs = std::filesystem;
  ExperimentConfig a = base, b = base;
  a.method = Method::pitdn;
  a.out_dir = out + "/pitdn";
  b.method = Method::pinn;
  b.out_dir = out + "/pinn";

  std::printf("training %s / pitdn (seed %llu)...\n", base.problem.c_str(),
              static_cast<unsigned long long>(base.seed));
  ExperimentResult ra = run_experiment(a);
  std::printf("training %s / pinn (seed %llu)...\n", base.problem.c_str(),
              static_cast<unsigned long long>(base.seed));
  ExperimentResult rb = run_experiment(b);

  const bool same_col = read_all(a.out_dir + "/collocation.csv") ==
                        read_all(b.out_dir + "/collocation.csv");
  const double factor = rb.metrics.rel_l2 / ra.metrics.rel_l2;

  std::printf("\n%-8s %-12s %-12s %-12s %s\n", "method", "rel_l2", "rel_linf",
              "final_loss", "train_s");
  for (const MetricsReport* m : {&ra.metrics, &rb.metrics})
    std::printf("%-8s %-12.4e %-12.4e %-12.4e %.1f\n", m->method.c_str(), m->rel_l2,
                m->rel_linf, m->final_loss.total, m->train_seconds);
  std::printf("\nerror ratio (pinn / pitdn): %.2fx\n", factor);
  std::printf("identical collocation files: %s\n", same_col ? "yes" : "NO");

  nlohmann::json j = {
      {"problem", base.problem},
      {"seed", base.seed},
      {"pitdn", {{"rel_l2", ra.metrics.rel_l2}, {"rel_linf", ra.metrics.rel_linf},
                 {"final_loss", ra.metrics.final_loss.total},
                 {"train_seconds", ra.metrics.train_seconds}}},
      {"pinn", {{"rel_l2", rb.metrics.rel_l2}, {"rel_linf", rb.metrics.rel_linf},
                {"final_loss", rb.metrics.final_loss.total},
                {"train_seconds", rb.metrics.train_seconds}}},
      {"error_ratio_pinn_over_pitdn", factor},
      {"identical_collocation", same_col},
  };
  fs::create_directories(out);
  std::ofstream jf(out + "/compare.json", std::ios::binary);
  jf << j.dump(2) << '\n';
  std::printf("wrote %s/compare.json\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver for time-dependent PDEs that learns the temporal derivative field"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string method_str = "pitdn";
  std::string config_path;

  auto add_shared = [&](CLI::App* c) {
    c->add_option("--problem", cfg.problem,
                  "problem name: advection, burgers, klein-gordon")
        ->required();
    c->add_option("--seed", cfg.seed, "seed for sampling and the initial weights");
    c->add_option("--interior", cfg.n_interior, "interior collocation points");
    c->add_option("--boundary", cfg.n_boundary, "boundary collocation points");
    c->add_option("--initial", cfg.n_initial, "initial-time collocation points");
    c->add_option("--m-per-unit-time", cfg.quadrature.m_per_unit_time,
                  "quadrature subintervals per unit time");
    c->add_option("--layers", cfg.layer_sizes, "layer widths (first 2, last 1)");
    c->add_option("--adam-iters", cfg.schedule.adam_iters, "first-phase iterations");
    c->add_option("--adam-lr", cfg.schedule.adam_lr, "first-phase learning rate");
    c->add_option("--lbfgs-iters", cfg.schedule.lbfgs_max_iters,
                  "second-phase iteration cap");
    c->add_option("--eval-nx", cfg.eval_nx, "evaluation grid intervals in x");
    c->add_option("--eval-nt", cfg.eval_nt, "evaluation grid intervals in t");
    c->add_option("--eval-m-per-unit-time", cfg.eval_m_per_unit_time,
                  "reconstruction node density for error measurement");
    c->add_option("--burgers-ref-nx", cfg.burgers_ref_nx,
                  "reference resolution for the viscous problem");
    c->add_flag("--collocation-dump,!--no-collocation-dump", cfg.dump_collocation,
                "write collocation.csv alongside the other artifacts");
    // Not set_config(): this CLI11 only processes config files attached to
    // the root app, and the file would be silently ignored on a subcommand.
    // The file is applied by hand after the parse, with flag values winning.
    c->add_option("--config", config_path, "read options from an INI/TOML file");
  };

  CLI::App* tr = app.add_subcommand("train", "train one model and write run artifacts");
  add_shared(tr);
  tr->add_option("--method", method_str, "pitdn (derivative field) or pinn (direct state)")
      ->check(CLI::IsMember({"pitdn", "pinn"}));
  tr->add_option("--out", cfg.out_dir, "artifact directory")->required();

  CLI::App* rf = app.add_subcommand(
      "reference", "solve and certify the finite-difference reference grid");
  std::string rf_problem;
  int rf_nx = 4096, rf_nt = 0;
  std::string rf_out;
  rf->add_option("problem", rf_problem, "only 'burgers' has a grid reference")
      ->required()
      ->check(CLI::IsMember({"burgers"}));
  rf->add_option("--nx", rf_nx, "space intervals (multiple of 4)");
  rf->add_option("--nt", rf_nt, "time steps (0: largest stable step)");
  rf->add_option("--out", rf_out, "output CSV path")->required();

  CLI::App* ck = app.add_subcommand("check", "run one self-check");
  std::string ck_name, ck_ckpt, ck_problem = "advection";
  ck->add_option("name", ck_name, "quadrature | propagation | wirtinger | gradients | equivalence")
      ->required()
      ->check(CLI::IsMember(
          {"quadrature", "propagation", "wirtinger", "gradients", "equivalence"}));
  ck->add_option("--checkpoint", ck_ckpt, "trained checkpoint (equivalence only)");
  ck->add_option("--problem", ck_problem, "problem the checkpoint was trained on");

  CLI::App* cp = app.add_subcommand(
      "compare", "train both methods with a shared seed and compare errors");
  add_shared(cp);
  std::string cp_out;
  cp->add_option("--out", cp_out, "output directory (pitdn/, pinn/, compare.json)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot open config file " << config_path << "\n";
      return 1;
    }
    try {
      for (CLI::App* c : {tr, cp})
        if (c->parsed()) c->parse_from_stream(f);
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << "\n";
      return 1;
    }
  }

  try {
    if (tr->parsed()) {
      cfg.method = method_by_name(method_str);
      return cmd_train(cfg);
    }
    if (rf->parsed()) return cmd_reference(rf_nx, rf_nt, rf_out);
    if (ck->parsed()) return cmd_check(ck_name, ck_ckpt, ck_problem);
    if (cp->parsed()) return cmd_compare(cfg, cp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
