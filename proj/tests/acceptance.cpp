// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "rfspec/basis.hpp"
#include "rfspec/closedform.hpp"
#include "rfspec/evolve.hpp"
#include "rfspec/operators.hpp"
#include "rfspec/opmatrix.hpp"
#include "rfspec/oracle.hpp"
#include "rfspec/specfun.hpp"

using namespace rfspec;

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }
double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

// For α > 1 the Weyl pair is taken in its differentiated form.
std::vector<Operator> four_ops(double alpha, double gamma) {
  const bool dx = alpha > 1.0;
  return {{dx ? OperatorKind::DxWeylRight : OperatorKind::WeylRight, alpha, 0.0},
          {dx ? OperatorKind::DxWeylLeftNeg : OperatorKind::WeylLeftNeg, alpha, 0.0},
          {OperatorKind::RieszFeller, alpha, gamma},
          {OperatorKind::FracLaplacian, alpha, 0.0}};
}

// The four operators share one base matrix, so the battery builds it once.
double battery(ClosedFormFunction f, double alpha, double gamma, std::size_t n, double l, std::string& detail) {
  const OperatorMatrix base = build_base_matrix(alpha, n, 100);
  const SpectralGrid g = make_grid(n, l);
  double worst = 0.0;
  for (const Operator& op : four_ops(alpha, gamma)) {
    const OperatorMatrix m = scale_to_operator(base, op.kind, op.gamma, l);
    const ApplyReport r = apply_with_aux([f](double x) { return closed_form_value(f, x); },
                                         default_decomposition(f), m, g, f);
    detail += to_string(op.kind) + "=" + fmt("%.3e ", *r.linf_error);
    worst = std::max(worst, *r.linf_error);
  }
  return worst;
}

void criterion1() {
  const auto t0 = clock_type::now();
  std::string detail;
  const double worst = battery(ClosedFormFunction::Erf, 0.62, 0.49, 256, 1.1, detail);
  const double t = since(t0);
  report(1, worst <= 1e-12 && t <= 30.0, detail + fmt("(%.1f s)", t));
}

void criterion2() {
  const auto t0 = clock_type::now();
  std::string detail;
  const double worst = battery(ClosedFormFunction::Log1pSq, 1.12, 0.83, 256, 30.0, detail);
  const double t = since(t0);
  report(2, worst <= 1.2e-3 && t <= 30.0, detail + fmt("(%.1f s)", t));
}

void criterion3() {
  const auto t0 = clock_type::now();
  std::vector<double> ls;
  for (int i = 1; i <= 10; ++i) ls.push_back(0.5 * i);
  const SweepResult s = sweep_errors(ClosedFormFunction::Erf, {OperatorKind::RieszFeller, 1.37, 0.58}, {128}, ls);
  double best = INFINITY, best_l = 0.0;
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (s.errors[i][0] < best) {
      best = s.errors[i][0];
      best_l = ls[i];
    }
  const double t = since(t0);
  report(3, best <= 1e-12 && t <= 120.0, fmt("best error %.3e at L = %.1f (%.1f s)", best, best_l, t));
}

void criterion4() {
  const auto t0 = clock_type::now();
  EvolutionConfig cfg; // α = 1.37, γ = -0.63, N = 2048, L = 300, dt = 0.05, t in [0, 12]
  cfg.wall_budget = 600.0;
  try {
    const FisherProblem p = FisherProblem::from_config(cfg);
    const EvolutionResult res = rk4_evolve(cfg, p, initial_state(cfg, p.grid()));
    const RegressionResult fit = fit_exponential(res.trace, 8.0, 11.5);
    const double d = std::abs(fit.slope - 1.0 / cfg.alpha);
    const double t = since(t0);
    report(4, d <= 5e-3 && 1.0 - fit.pearson_rho <= 1e-4 && t <= 600.0,
           fmt("|sigma - 1/alpha| = %.3e, 1 - rho = %.3e", d, 1.0 - fit.pearson_rho) + fmt(" (%.1f s)", t));
  } catch (const std::exception& e) {
    report(4, false, e.what());
  }
}

void criterion5() {
  const auto t0 = clock_type::now();
  const OracleFunction u = oracle_function(ClosedFormFunction::Erf);
  double worst = 0.0, worst_rep = 0.0;
  const std::size_t n = 256;
  const double l = 1.1;
  for (auto [alpha, gamma] : {std::pair{0.4, 0.2}, std::pair{1.37, -0.63}}) {
    const Operator op{OperatorKind::RieszFeller, alpha, gamma};
    const ApplyReport r = apply_closed_form(ClosedFormFunction::Erf, op, n, l);
    for (int i = 0; i < 5; ++i) {
      const std::size_t j = n / 4 + static_cast<std::size_t>(i) * (n / 2) / 4;
      const double x = r.grid.x_nodes[j];
      const double q = quad_operator(op, u, x).value;
      worst = std::max(worst, std::abs(r.approx[j].real() - q));
      const double qd = quad_operator(op, u, x, {}, Representation::Derivative).value;
      const double qf = quad_operator(op, u, x, {}, Representation::Difference).value;
      worst_rep = std::max(worst_rep, std::abs(qd - qf));
    }
  }
  const double t = since(t0);
  report(5, worst <= 1e-6 && worst_rep <= 1e-6,
         fmt("spectral vs quadrature %.3e, derivative vs difference %.3e (%.1f s)", worst, worst_rep, t));
}

void criterion6() {
  double refl = 0.0, dup = 0.0, cw = 0.0, col = 0.0, anchor = 0.0;
  for (int i = 1; i < 400; ++i) {
    const double x = -9.9875 + 0.05 * i;
    if (std::abs(x - std::round(x)) < 1e-9) continue;
    refl = std::max(refl, rel(rfspec::gamma(x) * rfspec::gamma(1.0 - x), kPi / std::sin(kPi * x)));
    const double y = 0.0125 + 0.04 * i;
    dup = std::max(dup, rel(rfspec::gamma(y) * rfspec::gamma(y + 0.5), std::pow(2.0, 1.0 - 2.0 * y) * std::sqrt(kPi) * rfspec::gamma(2.0 * y)));
  }
  for (int i = 1; i < 20; ++i) {
    const double a = 0.1 * i;
    cw = std::max(cw, rel(rf_coeffs(a, 0.0).c1, c_alpha(a)));
  }
  for (double a : {0.62, 1.0, 1.12, 1.37, 1.8}) {
    const OperatorMatrix m = build_base_matrix(a, 32);
    for (int k = 1; k <= 8; ++k)
      for (std::size_t j = 0; j < 32; ++j) {
        const cplx want = frac_lap_lambda(a, k, m.l_scale / std::tan(kPi * (2.0 * j + 1) / 64.0));
        col = std::max(col, std::abs(m(j, slot_of({k}, 32)) - want) / std::max(1.0, std::abs(want)));
      }
  }
  for (int i = 1; i < 20; ++i) {
    const double a = 0.05 * i;
    const WeylAtZero w = weyl_phi_at_zero(a, 1);
    const double den = std::sqrt(kPi) * rfspec::gamma(1.0 - a);
    const double p = rfspec::gamma(1.0 + a / 2) * rfspec::gamma((1.0 - a) / 2), q = rfspec::gamma(1.0 - a / 2) * rfspec::gamma((1.0 + a) / 2);
    anchor = std::max(anchor, rel(w.right, cplx{p, q} / den));
    anchor = std::max(anchor, rel(w.left, cplx{p, -q} / den));
    const double g = rfspec::gamma((1.0 + a) / 2);
    anchor = std::max(anchor, rel(w.fraclap, cplx{0.0, std::pow(2.0, a) * g * g / kPi}));
  }
  const bool ok = refl <= 1e-12 && dup <= 1e-12 && cw <= 1e-12 && col <= 1e-10 && anchor <= 1e-12;
  report(6, ok, fmt("reflection %.2e, duplication %.2e, c1 vs c_alpha %.2e", refl, dup, cw) +
                    fmt(", columns %.2e, x=0 anchors %.2e", col, anchor));
}

void criterion7() {
  std::mt19937_64 rng(7);
  auto unif = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto unif_int = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  const int cases = 120;
  int bad_cols = 0, bad_herm = 0, bad_round = 0;
  for (int c = 0; c < cases; ++c) {
    const double alpha = unif(0.05, 1.95);
    const auto n = static_cast<std::size_t>(unif_int(2, 24));
    const OperatorMatrix m = build_base_matrix(alpha, n, 40);
    bool ok = true;
    for (std::size_t j = 0; j < n; ++j) {
      ok &= m(j, slot_of({0}, n)) == cplx{};
      if (n % 2 == 0) ok &= m(j, slot_of({min_mode(n)}, n)) == cplx{};
      for (int k = 1; k <= max_mode(n); ++k) {
        ok &= m(j, slot_of({-k}, n)) == std::conj(m(j, slot_of({k}, n)));
        ok &= m(n - 1 - j, slot_of({k}, n)) == std::conj(m(j, slot_of({k}, n)));
      }
    }
    bad_cols += !ok;
  }
  for (int c = 0; c < cases; ++c) {
    const auto n = static_cast<std::size_t>(unif_int(2, 80));
    const SpectralGrid g = make_grid(n, unif(0.2, 5.0));
    std::vector<double> v(n);
    for (double& x : v) x = unif(-1, 1);
    const CoeffVector u = analyze(std::span<const double>(v), g, 0.0);
    double worst = 0.0;
    for (int k = 1; k <= max_mode(n); ++k)
      if (-k >= min_mode(n)) worst = std::max(worst, std::abs(u.at({-k}) - std::conj(u.at({k}))));
    bad_herm += worst > 1e-12;
  }
  for (int c = 0; c < cases; ++c) {
    const auto n = static_cast<std::size_t>(unif_int(2, 90));
    const SpectralGrid g = make_grid(n, unif(0.2, 5.0));
    std::vector<cplx> v(n);
    for (auto& x : v) x = {unif(-1, 1), unif(-1, 1)};
    const std::vector<cplx> back = synthesize_nodes(analyze(std::span<const cplx>(v), g, 0.0));
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(back[j] - v[j]));
    bad_round += worst > 1e-12;
  }
  report(7, bad_cols + bad_herm + bad_round == 0,
         std::to_string(cases) + " cases each; failures: columns " + std::to_string(bad_cols) + ", Hermitian " +
             std::to_string(bad_herm) + ", round trip " + std::to_string(bad_round));
}

} // namespace

int main() {
  const auto run = [](int id, void (*f)()) {
    try {
      f();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  };
  run(1, criterion1);
  run(2, criterion2);
  run(3, criterion3);
  run(4, criterion4);
  run(5, criterion5);
  run(6, criterion6);
  run(7, criterion7);
  return failures == 0 ? 0 : 1;
}
