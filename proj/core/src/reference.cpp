#include "pitdn/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace pitdn {

double GridSolution::interpolate(double xq, double tq) const {
  const double ex = 1e-9 * std::max(1.0, std::abs(domain.x_hi - domain.x_lo));
  const double et = 1e-9 * std::max(1.0, domain.t_end);
  if (xq < domain.x_lo - ex || xq > domain.x_hi + ex || tq < -et || tq > domain.t_end + et)
    throw std::domain_error("GridSolution::interpolate: query outside grid");
  double fx = (xq - domain.x_lo) / dx;
  double ft = tq / dt;
  int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 1);
  int k = std::clamp(static_cast<int>(std::floor(ft)), 0, nt - 1);
  const double ax = std::clamp(fx - i, 0.0, 1.0);
  const double at = std::clamp(ft - k, 0.0, 1.0);
  const double v00 = value(k, i), v01 = value(k, i + 1);
  const double v10 = value(k + 1, i), v11 = value(k + 1, i + 1);
  return (1.0 - at) * ((1.0 - ax) * v00 + ax * v01) + at * ((1.0 - ax) * v10 + ax * v11);
}

namespace {

// Semi-discrete right side: -d/dx(u^2/2) by central differencing of the flux
// plus central diffusion.  Walls stay zero.
void burgers_rhs(std::span<const double> u, std::span<double> out, double dx, double nu) {
  const int n = static_cast<int>(u.size()) - 1;
  out[0] = 0.0;
  out[n] = 0.0;
  const double inv2dx = 1.0 / (2.0 * dx);
  const double invdx2 = nu / (dx * dx);
  for (int i = 1; i < n; ++i) {
    const double fl = 0.5 * u[i - 1] * u[i - 1];
    const double fr = 0.5 * u[i + 1] * u[i + 1];
    out[i] = -(fr - fl) * inv2dx + (u[i + 1] - 2.0 * u[i] + u[i - 1]) * invdx2;
  }
}

}  // namespace

GridSolution burgers_fd_solve(int nx, int nt, double nu) {
  if (nx < 4) throw std::invalid_argument("burgers_fd_solve: nx must be at least 4");
  if (nt < 0) throw std::invalid_argument("burgers_fd_solve: nt must be non-negative");
  if (!(nu > 0.0)) throw std::invalid_argument("burgers_fd_solve: nu must be positive");

  GridSolution g;
  g.domain = Domain1D{-1.0, 1.0, 1.0};
  g.nx = nx;
  g.nu = nu;
  g.scheme = "rk4-central-conservative";
  g.dx = (g.domain.x_hi - g.domain.x_lo) / nx;
  g.x.resize(nx + 1);
  for (int i = 0; i <= nx; ++i) g.x[i] = g.domain.x_lo + i * g.dx;

  std::vector<double> u(nx + 1);
  double umax = 0.0;
  for (int i = 0; i <= nx; ++i) {
    u[i] = -std::sin(std::numbers::pi * g.x[i]);
    umax = std::max(umax, std::abs(u[i]));
  }
  u[0] = 0.0;
  u[nx] = 0.0;
  umax = std::max(umax, 1e-12);

  const double dt_limit = 0.9 * std::min(0.5 * g.dx * g.dx / nu, g.dx / umax);
  if (nt == 0) nt = static_cast<int>(std::ceil(g.domain.t_end / dt_limit));
  if (g.domain.t_end / nt > dt_limit) {
    const int nt_min = static_cast<int>(std::ceil(g.domain.t_end / dt_limit));
    throw std::invalid_argument("burgers_fd_solve: nt=" + std::to_string(nt) +
                                " violates the stability bound; use nt >= " +
                                std::to_string(nt_min));
  }
  // cap storage at 1000 uniform snapshots; round nt up so the stride divides
  const int n_store = std::min(nt, 1000);
  const int stride = (nt + n_store - 1) / n_store;
  nt = stride * n_store;
  g.solver_nt = nt;
  g.solver_dt = g.domain.t_end / nt;
  g.nt = n_store;
  g.dt = g.domain.t_end / n_store;
  g.t.resize(n_store + 1);
  for (int k = 0; k <= n_store; ++k) g.t[k] = k * g.dt;
  g.t[n_store] = g.domain.t_end;

  g.values.assign(static_cast<std::size_t>(n_store + 1) * (nx + 1), 0.0);
  std::copy(u.begin(), u.end(), g.values.begin());

  const double dt = g.solver_dt;
  std::vector<double> k1(nx + 1), k2(nx + 1), k3(nx + 1), k4(nx + 1), tmp(nx + 1);
  for (int step = 0; step < nt; ++step) {
    burgers_rhs(u, k1, g.dx, nu);
    for (int i = 0; i <= nx; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    burgers_rhs(tmp, k2, g.dx, nu);
    for (int i = 0; i <= nx; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    burgers_rhs(tmp, k3, g.dx, nu);
    for (int i = 0; i <= nx; ++i) tmp[i] = u[i] + dt * k3[i];
    burgers_rhs(tmp, k4, g.dx, nu);
    for (int i = 0; i <= nx; ++i)
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    u[0] = 0.0;
    u[nx] = 0.0;
    if (!std::isfinite(u[nx / 2]))
      throw std::runtime_error("burgers_fd_solve: solution blew up at step " +
                               std::to_string(step + 1));
    if ((step + 1) % stride == 0)
      std::copy(u.begin(), u.end(),
                g.values.begin() + static_cast<std::size_t>((step + 1) / stride) * (nx + 1));
  }
  return g;
}

RichardsonReport richardson_verify(const std::function<GridSolution(int)>& solve,
                                   std::span<const int> nx_list,
                                   std::span<const double> sample_times,
                                   double order_lo, double order_hi) {
  if (nx_list.size() < 3)
    throw std::invalid_argument("richardson_verify: need at least three resolutions");
  for (std::size_t k = 1; k < nx_list.size(); ++k)
    if (nx_list[k] != 2 * nx_list[k - 1])
      throw std::invalid_argument("richardson_verify: resolutions must double");
  if (sample_times.empty())
    throw std::invalid_argument("richardson_verify: need at least one sample time");

  RichardsonReport rep;
  rep.nx.assign(nx_list.begin(), nx_list.end());
  std::vector<GridSolution> sols;
  sols.reserve(nx_list.size());
  for (int nx : nx_list) sols.push_back(solve(nx));

  const GridSolution& coarse = sols.front();
  for (std::size_t k = 0; k + 1 < sols.size(); ++k) {
    double d = 0.0;
    for (double tq : sample_times)
      for (int i = 1; i < coarse.nx; ++i)
        d = std::max(d, std::abs(sols[k].interpolate(coarse.x[i], tq) -
                                 sols[k + 1].interpolate(coarse.x[i], tq)));
    rep.diffs.push_back(d);
  }

  rep.monotone = true;
  for (std::size_t k = 0; k + 1 < rep.diffs.size(); ++k)
    if (!(rep.diffs[k + 1] < rep.diffs[k])) rep.monotone = false;

  // a pair below ~1e-13 cannot support a trustworthy order estimate
  const double floor = 1e-13;
  bool any_order = false, orders_ok = true;
  for (std::size_t k = 0; k + 1 < rep.diffs.size(); ++k) {
    if (rep.diffs[k] < floor || rep.diffs[k + 1] < floor) {
      rep.at_machine_precision = true;
      rep.orders.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double p = std::log2(rep.diffs[k] / rep.diffs[k + 1]);
    rep.orders.push_back(p);
    any_order = true;
    if (p < order_lo || p > order_hi) orders_ok = false;
  }
  rep.certified = rep.monotone && any_order && orders_ok;

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "order(s) %s in [%g, %g], diffs %s monotone%s",
                any_order ? (orders_ok ? "inside" : "OUTSIDE") : "unresolvable",
                order_lo, order_hi, rep.monotone ? "" : "NOT",
                rep.at_machine_precision ? ", some pairs at machine precision" : "");
  rep.detail = buf;
  return rep;
}

namespace {

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

void save_grid_csv(const GridSolution& g, const std::string& path) {
  std::string body;
  body.reserve(static_cast<std::size_t>(g.nt + 2) * (g.nx + 2) * 20);
  body += "t";
  for (int i = 0; i <= g.nx; ++i) {
    body += ',';
    append_num(body, g.x[i]);
  }
  body += '\n';
  for (int k = 0; k <= g.nt; ++k) {
    append_num(body, g.t[k]);
    for (int i = 0; i <= g.nx; ++i) {
      body += ',';
      append_num(body, g.value(k, i));
    }
    body += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_grid_csv: cannot open " + path);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("save_grid_csv: write failed for " + path);

  nlohmann::json meta = {
      {"nx", g.nx},         {"nt", g.nt},
      {"dx", g.dx},         {"dt", g.dt},
      {"solver_nt", g.solver_nt}, {"solver_dt", g.solver_dt},
      {"nu", g.nu},         {"scheme", g.scheme},
      {"domain", {{"x_lo", g.domain.x_lo}, {"x_hi", g.domain.x_hi}, {"t_end", g.domain.t_end}}},
  };
  std::ofstream jf(path + ".json", std::ios::binary);
  if (!jf) throw std::runtime_error("save_grid_csv: cannot open " + path + ".json");
  jf << meta.dump(2) << '\n';
}

GridSolution load_grid_csv(const std::string& path) {
  std::ifstream jf(path + ".json", std::ios::binary);
  if (!jf) throw std::runtime_error("load_grid_csv: missing sidecar " + path + ".json");
  nlohmann::json meta = nlohmann::json::parse(jf);

  GridSolution g;
  g.nx = meta.at("nx").get<int>();
  g.nt = meta.at("nt").get<int>();
  g.dx = meta.at("dx").get<double>();
  g.dt = meta.at("dt").get<double>();
  g.solver_nt = meta.at("solver_nt").get<int>();
  g.solver_dt = meta.at("solver_dt").get<double>();
  g.nu = meta.at("nu").get<double>();
  g.scheme = meta.at("scheme").get<std::string>();
  const auto& dom = meta.at("domain");
  g.domain = Domain1D{dom.at("x_lo").get<double>(), dom.at("x_hi").get<double>(),
                      dom.at("t_end").get<double>()};

  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_grid_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("t,", 0) != 0)
    throw std::runtime_error("load_grid_csv: bad header in " + path);
  const char* p = line.c_str() + 1;  // at first comma
  while (*p == ',') {
    char* end = nullptr;
    g.x.push_back(std::strtod(p + 1, &end));
    p = end;
  }
  if (static_cast<int>(g.x.size()) != g.nx + 1)
    throw std::runtime_error("load_grid_csv: header width disagrees with sidecar");

  g.values.reserve(static_cast<std::size_t>(g.nt + 1) * (g.nx + 1));
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    char* end = nullptr;
    g.t.push_back(std::strtod(line.c_str(), &end));
    const char* q = end;
    int cols = 0;
    while (*q == ',') {
      g.values.push_back(std::strtod(q + 1, &end));
      q = end;
      ++cols;
    }
    if (cols != g.nx + 1)
      throw std::runtime_error("load_grid_csv: ragged row in " + path);
  }
  if (static_cast<int>(g.t.size()) != g.nt + 1)
    throw std::runtime_error("load_grid_csv: row count disagrees with sidecar");
  return g;
}

}  // namespace pitdn
