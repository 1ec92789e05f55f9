#include "rfspec/evolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "rfspec/errors.hpp"

namespace rfspec {

namespace {

void check_finite(std::span<const double> v, const SpectralGrid& g, const char* what) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (!std::isfinite(v[j])) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "divergence: non-finite %s at node %zu (x = %.17g)", what, j,
                    g.x_nodes[j]);
      throw NumericError(buf);
    }
}

} // namespace

void EvolutionConfig::validate() const {
  check_skewness(alpha, gamma);
  if (n < 2) throw DomainError("evolution: N must be at least 2");
  if (!(l_scale > 0.0)) throw DomainError("evolution: L must be positive");
  if (!(dt > 0.0)) throw DomainError("evolution: dt must be positive");
  if (!(t_end >= 0.0)) throw DomainError("evolution: t_end must be nonnegative");
  if (snapshot_stride < 1) throw DomainError("evolution: snapshot stride must be >= 1");
}

double initial_condition(double x, double alpha) {
  const double r = std::sqrt(1.0 + x * x);
  // 1/2 - x/(2r) = 1/(2r(r + x)) avoids cancellation for large positive x
  const double base = x > 0.0 ? 1.0 / (2.0 * r * (r + x)) : 0.5 - x / (2.0 * r);
  return std::pow(base, alpha / 2);
}

FisherProblem::FisherProblem(OperatorMatrix matrix, SpectralGrid grid, AuxDecomposition decomp,
                             int jobs)
    : matrix_(std::move(matrix)), grid_(std::move(grid)), decomp_(std::move(decomp)), jobs_(jobs) {
  if (matrix_.n != grid_.n || matrix_.l_scale != grid_.l_scale)
    throw DomainError("FisherProblem: matrix and grid do not match");
  const Operator op = matrix_.op();
  v_.resize(grid_.n);
  dv_.resize(grid_.n);
  for (std::size_t j = 0; j < grid_.n; ++j) {
    v_[j] = decomp_.value(grid_.x_nodes[j]);
    dv_[j] = decomp_.apply(op, grid_.x_nodes[j]);
  }
}

FisherProblem FisherProblem::from_config(const EvolutionConfig& cfg) {
  cfg.validate();
  BuildOptions opts = cfg.build;
  opts.jobs = cfg.jobs;
  OperatorMatrix m = scale_to_operator(build_base_matrix(cfg.alpha, cfg.n, cfg.l_lim, opts),
                                       OperatorKind::RieszFeller, cfg.gamma, cfg.l_scale);
  return FisherProblem(std::move(m), make_grid(cfg.n, cfg.l_scale),
                       AuxDecomposition::for_limits(cfg.u_minus, cfg.u_plus), cfg.jobs);
}

std::vector<double> FisherProblem::diffusion(std::span<const double> u) const {
  if (u.size() != grid_.n) throw DomainError("FisherProblem: state has wrong length");
  std::vector<double> w(grid_.n);
  for (std::size_t j = 0; j < grid_.n; ++j) w[j] = u[j] - v_[j];
  const std::vector<cplx> dw = apply(matrix_, analyze(std::span<const double>(w), grid_), jobs_);
  std::vector<double> out(grid_.n);
  for (std::size_t j = 0; j < grid_.n; ++j) out[j] = dw[j].real() + dv_[j];
  return out;
}

std::vector<double> FisherProblem::rhs(std::span<const double> u) const {
  std::vector<double> out = diffusion(u);
  for (std::size_t j = 0; j < grid_.n; ++j) out[j] += u[j] * (1.0 - u[j]);
  check_finite(out, grid_, "right-hand side");
  return out;
}

std::vector<double> fisher_rhs(std::span<const double> u, const OperatorMatrix& matrix,
                               const AuxDecomposition& decomp, const SpectralGrid& grid) {
  return FisherProblem(matrix, grid, decomp).rhs(u);
}

std::vector<double> rk4_step(const FisherProblem& p, std::span<const double> u, double dt) {
  const std::size_t n = u.size();
  std::vector<double> tmp(n), out(u.begin(), u.end());
  const std::vector<double> k1 = p.rhs(u);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * dt * k1[j];
  const std::vector<double> k2 = p.rhs(tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * dt * k2[j];
  const std::vector<double> k3 = p.rhs(tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + dt * k3[j];
  const std::vector<double> k4 = p.rhs(tmp);
  for (std::size_t j = 0; j < n; ++j) out[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  return out;
}

std::vector<double> initial_state(const EvolutionConfig& cfg, const SpectralGrid& grid) {
  std::vector<double> u(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) u[j] = initial_condition(grid.x_nodes[j], cfg.alpha);
  return u;
}

EvolutionResult rk4_evolve(const EvolutionConfig& cfg, const FisherProblem& p,
                           std::vector<double> u0) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const int steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
  EvolutionResult res;
  auto record = [&](int step, const std::vector<double>& u) {
    const double t = step * cfg.dt;
    res.snapshots.push_back({t, u});
    if (cfg.track_front) {
      res.trace.times.push_back(t);
      res.trace.x_half.push_back(front_position(u, p.grid(), p.decomposition(), cfg.front_level));
    }
  };
  std::vector<double> u = std::move(u0);
  record(0, u);
  for (int step = 1; step <= steps; ++step) {
    u = rk4_step(p, u, cfg.dt);
    if (step % cfg.snapshot_stride == 0 || step == steps) record(step, u);
    if (cfg.wall_budget > 0.0) {
      const double el = std::chrono::duration<double>(clock::now() - start).count();
      if (el > cfg.wall_budget)
        throw BudgetError("evolution exceeded the wall-time budget of " +
                          std::to_string(cfg.wall_budget) + " s at t = " +
                          std::to_string(step * cfg.dt));
    }
  }
  res.steps = steps;
  res.wall_time = std::chrono::duration<double>(clock::now() - start).count();
  return res;
}

double front_position(std::span<const double> u, const SpectralGrid& grid,
                      const AuxDecomposition& decomp, double level) {
  const std::size_t n = grid.n;
  if (u.size() != n) throw DomainError("front_position: state has wrong length");
  std::size_t j = 0;
  for (; j + 1 < n; ++j) {
    const double a = u[j] - level, b = u[j + 1] - level;
    if (a == 0.0) return grid.x_nodes[j];
    if ((a < 0.0) != (b < 0.0) && b != 0.0) break;
  }
  if (j + 1 >= n) {
    if (u[n - 1] == level) return grid.x_nodes[n - 1];
    throw NumericError("front tracking: u never crosses " + std::to_string(level) +
                       " on the grid (front left the resolvable domain)");
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = u[i] - decomp.value(grid.x_nodes[i]);
  const CoeffVector c = analyze(std::span<const double>(w), grid);
  const double L = grid.l_scale;
  auto f = [&](double s) { return synthesize(c, s).real() + decomp.value(L / std::tan(s)) - level; };

  double sa = grid.s_nodes[j], sb = grid.s_nodes[j + 1];
  double fa = u[j] - level;
  while (sb - sa > 1e-14) {
    const double mid = 0.5 * (sa + sb);
    if (mid <= sa || mid >= sb) break;
    const double fm = f(mid);
    if (fm == 0.0) return L / std::tan(mid);
    if ((fm < 0.0) == (fa < 0.0)) {
      sa = mid;
      fa = fm;
    } else {
      sb = mid;
    }
  }
  return L / std::tan(0.5 * (sa + sb));
}

RegressionResult fit_exponential(const FrontTrace& trace, double t0, double t1) {
  if (trace.times.size() != trace.x_half.size())
    throw DomainError("fit_exponential: trace arrays differ in length");
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < t0 - 1e-9 || t > t1 + 1e-9) continue;
    if (!(trace.x_half[i] > 0.0))
      throw DomainError("fit_exponential: nonpositive front position " +
                        std::to_string(trace.x_half[i]) + " at t = " + std::to_string(t));
    ts.push_back(t);
    ys.push_back(std::log(trace.x_half[i]));
  }
  const std::size_t m = ts.size();
  if (m < 3) throw DomainError("fit_exponential: fewer than 3 samples in the window");
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= m;
  my /= m;
  double stt = 0.0, syy = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    syy += (ys[i] - my) * (ys[i] - my);
    sty += (ts[i] - mt) * (ys[i] - my);
  }
  RegressionResult r;
  r.slope = sty / stt;
  r.intercept = my - r.slope * mt;
  r.pearson_rho = syy > 0.0 ? std::clamp(sty / std::sqrt(stt * syy), -1.0, 1.0) : 1.0;
  r.samples = static_cast<int>(m);
  return r;
}

void write_snapshot_csv(const SpectralGrid& grid, std::span<const double> u, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  char buf[64];
  f << "x,u\n";
  for (std::size_t j = 0; j < grid.n; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid.x_nodes[j], u[j]);
    f << buf;
  }
  if (!f) throw FormatError("write failed: " + path);
}

void write_evolution_summary(const EvolutionConfig& cfg, const EvolutionResult& res,
                             const RegressionResult& fit, double t0, double t1,
                             const std::string& path) {
  nlohmann::json j;
  j["alpha"] = cfg.alpha;
  j["gamma"] = cfg.gamma;
  j["N"] = cfg.n;
  j["L"] = cfg.l_scale;
  j["l_lim"] = cfg.l_lim;
  j["dt"] = cfg.dt;
  j["t_end"] = cfg.t_end;
  j["fit_window"] = {t0, t1};
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["pearson_rho"] = fit.pearson_rho;
  j["samples"] = fit.samples;
  j["sigma_minus_inv_alpha"] = fit.slope - 1.0 / cfg.alpha;
  j["steps"] = res.steps;
  j["wall_time"] = res.wall_time;
  j["trace"] = {{"t", res.trace.times}, {"x_half", res.trace.x_half}};
  std::ofstream f(path);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
}

} // namespace rfspec
