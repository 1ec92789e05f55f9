#include "test_support.hpp"

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "rfspec/errors.hpp"
#include "rfspec/evolve.hpp"

namespace rfspec::test {
#include "frozen/evolve_values.inc"
} // namespace rfspec::test

using namespace rfspec;
using namespace rfspec::test;

namespace {

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rfspec_test_evolve";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

FisherProblem small_problem(double alpha, double gamma, std::size_t n, double l, double um, double up) {
  EvolutionConfig cfg;
  cfg.alpha = alpha;
  cfg.gamma = gamma;
  cfg.n = n;
  cfg.l_scale = l;
  cfg.l_lim = 60;
  cfg.u_minus = um;
  cfg.u_plus = up;
  return FisherProblem::from_config(cfg);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

} // namespace

TEST_CASE("initial condition") {
  for (const auto& [alpha, x, want] : kInitialCondition) {
    CAPTURE(alpha);
    CAPTURE(x);
    CHECK(rel_err(initial_condition(x, alpha), want) < 1e-14);
  }
}

TEST_CASE("front of the initial condition") {
  // u0 - aux decays like x^{-α}, so the interpolant is only algebraically accurate
  for (const auto& [alpha, x0] : kHalfCrossing) {
    CAPTURE(alpha);
    const SpectralGrid g = make_grid(512, 1.0);
    EvolutionConfig cfg;
    cfg.alpha = alpha;
    const std::vector<double> u = initial_state(cfg, g);
    const double x = front_position(u, g, AuxDecomposition::for_limits(1.0, 0.0));
    CHECK(std::abs(x - x0) < 2e-5);
  }
}

TEST_CASE("front of a single mode on the arctan step") {
  // u = 1/2 - atan(x)/π + 0.2/(1 + x²); the perturbation is c(1 - Re λ_1)
  const SpectralGrid g = make_grid(64, 1.0);
  const AuxDecomposition d = AuxDecomposition::for_limits(1.0, 0.0);
  auto u_of = [](long double x) { return 0.5L - std::atan(x) / 3.14159265358979323846264L + 0.2L / (1 + x * x); };
  std::vector<double> u(g.n);
  for (std::size_t j = 0; j < g.n; ++j) u[j] = static_cast<double>(u_of(g.x_nodes[j]));
  long double a = 0.0L, b = 10.0L;
  for (int i = 0; i < 200; ++i) {
    const long double m = (a + b) / 2;
    (u_of(m) > 0.5L ? a : b) = m;
  }
  CHECK(std::abs(front_position(u, g, d) - static_cast<double>(a)) < 1e-10);

  // level hit exactly at a node
  const double level = u[20];
  CHECK(front_position(u, g, d, level) == g.x_nodes[20]);

  std::vector<double> flat(g.n, 0.1);
  CHECK_THROWS_AS(front_position(flat, g, d), NumericError);
  CHECK_THROWS_AS(front_position(std::vector<double>(5, 0.0), g, d), DomainError);
}

TEST_CASE("equilibria") {
  const FisherProblem zero = small_problem(1.37, -0.63, 48, 3.0, 0.0, 0.0);
  for (double r : zero.rhs(std::vector<double>(48, 0.0))) CHECK(r == 0.0);
  const FisherProblem one = small_problem(1.37, -0.63, 48, 3.0, 1.0, 1.0);
  for (double r : one.rhs(std::vector<double>(48, 1.0))) CHECK(r == 0.0);

  EvolutionConfig cfg;
  cfg.n = 48;
  cfg.l_scale = 3.0;
  cfg.l_lim = 60;
  cfg.u_minus = cfg.u_plus = 1.0;
  cfg.dt = 0.1;
  cfg.t_end = 2.0;
  cfg.track_front = false;
  const EvolutionResult res = rk4_evolve(cfg, one, std::vector<double>(48, 1.0));
  CHECK(res.steps == 20);
  for (const Snapshot& s : res.snapshots)
    for (double v : s.u) CHECK(std::abs(v - 1.0) <= 1e-12);
}

TEST_CASE("right-hand side of the initial condition") {
  EvolutionConfig cfg;
  cfg.n = 129;
  cfg.l_scale = 4.0;
  cfg.l_lim = 80;
  const FisherProblem p = FisherProblem::from_config(cfg);
  const std::vector<double> r = p.rhs(initial_state(cfg, p.grid()));
  REQUIRE(p.grid().x_nodes[64] == 0.0);
  CHECK(std::isfinite(r[64]));
  CHECK(r[64] > 0.0);

  std::vector<double> bad = initial_state(cfg, p.grid());
  bad[10] = std::nan("");
  CHECK_THROWS_AS(p.rhs(bad), NumericError);
  CHECK_THROWS_AS(p.rhs(std::vector<double>(7, 0.0)), DomainError);
}

TEST_CASE("one step of the linearized problem") {
  // about u = 0 the rhs is B v = D v + v; compare one RK4 step with exp(dt B) v.
  // The odd part of the step map removes the quadratic term.
  const FisherProblem p = small_problem(0.62, 0.2, 16, 1.0, 0.0, 0.0);
  const std::size_t n = p.grid().n;
  const double eps = 1e-4;
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = eps * lambda_k(p.grid().x_nodes[j], 1).real();
  auto apply_b = [&](const std::vector<double>& x) {
    std::vector<double> y = p.diffusion(x);
    for (std::size_t j = 0; j < n; ++j) y[j] += x[j];
    return y;
  };
  auto exact = [&](double dt) {
    std::vector<double> sum = v, term = v;
    for (int m = 1; m < 80; ++m) {
      term = apply_b(term);
      double big = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        term[j] *= dt / m;
        sum[j] += term[j];
        big = std::max(big, std::abs(term[j]));
      }
      if (big < 1e-30) break;
    }
    return sum;
  };
  std::vector<double> minus_v(n);
  for (std::size_t j = 0; j < n; ++j) minus_v[j] = -v[j];
  auto step = [&](double dt) {
    const std::vector<double> a = rk4_step(p, v, dt), b = rk4_step(p, minus_v, dt);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = 0.5 * (a[j] - b[j]);
    return out;
  };
  const double e1 = max_abs_diff(step(0.2), exact(0.2)) / eps;
  const double e2 = max_abs_diff(step(0.1), exact(0.1)) / eps;
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 > 24.0);
  CHECK(e1 / e2 < 40.0);
}

TEST_CASE("RK4 converges with order four") {
  EvolutionConfig cfg;
  cfg.n = 32;
  cfg.l_scale = 2.0;
  cfg.l_lim = 60;
  cfg.t_end = 0.8;
  cfg.track_front = false;
  const FisherProblem p = FisherProblem::from_config(cfg);
  const std::vector<double> u0 = initial_state(cfg, p.grid());
  auto run = [&](double dt) {
    cfg.dt = dt;
    return rk4_evolve(cfg, p, u0).snapshots.back().u;
  };
  const std::vector<double> ref = run(0.0025);
  const double e1 = max_abs_diff(run(0.04), ref);
  const double e2 = max_abs_diff(run(0.02), ref);
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("snapshots follow the stride") {
  EvolutionConfig cfg;
  cfg.n = 32;
  cfg.l_scale = 2.0;
  cfg.l_lim = 60;
  cfg.dt = 0.1;
  cfg.t_end = 1.0;
  cfg.snapshot_stride = 3;
  const FisherProblem p = FisherProblem::from_config(cfg);
  const EvolutionResult res = rk4_evolve(cfg, p, initial_state(cfg, p.grid()));
  REQUIRE(res.snapshots.size() == 5);
  CHECK(res.snapshots[1].t == doctest::Approx(0.3));
  CHECK(res.snapshots[4].t == doctest::Approx(1.0));
  CHECK(res.trace.times.size() == 5);
  for (std::size_t i = 1; i < res.trace.x_half.size(); ++i) CHECK(res.trace.x_half[i] > res.trace.x_half[i - 1]);

  cfg.wall_budget = 1e-9;
  CHECK_THROWS_AS(rk4_evolve(cfg, p, initial_state(cfg, p.grid())), BudgetError);
}

TEST_CASE("exponential fit") {
  const FrontTrace tr{kFitTimes, kFitPositions};
  const RegressionResult r = fit_exponential(tr, 0.0, 5.0);
  CHECK(r.samples == 21);
  CHECK(rel_err(r.slope, kFitSlope) < 1e-12);
  CHECK(rel_err(r.intercept, kFitIntercept) < 1e-12);
  CHECK(std::abs(r.pearson_rho - kFitRho) < 1e-13);
  CHECK(fit_exponential(tr, 1.0, 2.0).samples == 5);

  FrontTrace neg = tr;
  neg.x_half[3] = -0.1;
  CHECK_THROWS_AS(fit_exponential(neg, 0.0, 5.0), DomainError);
  CHECK_NOTHROW(fit_exponential(neg, 1.0, 5.0));
  CHECK_THROWS_AS(fit_exponential(tr, 0.1, 0.6), DomainError);
  CHECK_THROWS_AS(fit_exponential({{0.0, 1.0}, {1.0}}, 0.0, 1.0), DomainError);
}

TEST_CASE("configuration errors") {
  EvolutionConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma = 0.9;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.snapshot_stride = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.alpha = 2.5;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("writers") {
  const SpectralGrid g = make_grid(4, 1.0);
  const std::vector<double> u{0.1, 0.2, 0.3, 0.4};
  const std::string p = temp_path("snap.csv");
  write_snapshot_csv(g, u, p);
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  CHECK(line == "x,u");
  std::getline(f, line);
  CHECK(line.substr(line.find(',')) == ",0.10000000000000001");

  EvolutionConfig cfg;
  EvolutionResult res;
  res.trace = {{0.0, 1.0}, {0.5, 0.7}};
  RegressionResult fit{0.7, -1.0, 0.999, 2};
  const std::string q = temp_path("summary.json");
  write_evolution_summary(cfg, res, fit, 0.0, 1.0, q);
  std::ifstream jf(q);
  const nlohmann::json j = nlohmann::json::parse(jf);
  CHECK(j["alpha"] == 1.37);
  CHECK(j["slope"] == 0.7);
  CHECK(j["sigma_minus_inv_alpha"].get<double>() == doctest::Approx(0.7 - 1 / 1.37));
  CHECK(j["trace"]["x_half"].size() == 2);
  CHECK_THROWS_AS(write_snapshot_csv(g, u, "/nonexistent/dir/u.csv"), FormatError);
}
