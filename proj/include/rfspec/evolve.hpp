#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rfspec/basis.hpp"
#include "rfspec/operators.hpp"
#include "rfspec/opmatrix.hpp"

namespace rfspec {

struct EvolutionConfig {
  double alpha = 1.37;
  double gamma = -0.63;
  std::size_t n = 2048;
  double l_scale = 300.0;
  int l_lim = kDefaultLLim;
  double dt = 0.05;
  double t_end = 12.0;
  int snapshot_stride = 1;
  /// Limits of u at -∞ and +∞; they fix the arctan decomposition.
  double u_minus = 1.0;
  double u_plus = 0.0;
  bool track_front = true;
  double front_level = 0.5;
  /// Wall-time guard in seconds; 0 disables it.
  double wall_budget = 0.0;
  int jobs = 0;
  BuildOptions build;

  void validate() const;
};

/// (1/2 - x/(2√(1+x²)))^{α/2}
double initial_condition(double x, double alpha);

/// Precomputed pieces of u_t = D_γ^α u + u(1-u) on a fixed grid.
class FisherProblem {
public:
  FisherProblem(OperatorMatrix matrix, SpectralGrid grid, AuxDecomposition decomp, int jobs = 0);

  /// Builds the Riesz-Feller matrix for cfg.
  static FisherProblem from_config(const EvolutionConfig& cfg);

  std::vector<double> rhs(std::span<const double> u) const;

  /// D_γ^α u alone (no reaction term).
  std::vector<double> diffusion(std::span<const double> u) const;

  const SpectralGrid& grid() const { return grid_; }
  const OperatorMatrix& matrix() const { return matrix_; }
  const AuxDecomposition& decomposition() const { return decomp_; }

private:
  OperatorMatrix matrix_;
  SpectralGrid grid_;
  AuxDecomposition decomp_;
  int jobs_;
  std::vector<double> v_;  // aux values at the nodes
  std::vector<double> dv_; // D_γ^α of the aux part at the nodes
};

/// Right-hand side for a given matrix, decomposition and grid.
std::vector<double> fisher_rhs(std::span<const double> u, const OperatorMatrix& matrix,
                               const AuxDecomposition& decomp, const SpectralGrid& grid);

/// One classical RK4 step.
std::vector<double> rk4_step(const FisherProblem& p, std::span<const double> u, double dt);

struct FrontTrace {
  std::vector<double> times;
  std::vector<double> x_half;
};

struct Snapshot {
  double t;
  std::vector<double> u;
};

struct EvolutionResult {
  std::vector<Snapshot> snapshots;
  FrontTrace trace;
  int steps = 0;
  double wall_time = 0.0;
};

/// Integrates from u0 (nodal values) to cfg.t_end. Snapshots and front
/// positions are taken at t = 0, every snapshot_stride steps and at the end.
EvolutionResult rk4_evolve(const EvolutionConfig& cfg, const FisherProblem& p,
                           std::vector<double> u0);

/// Initial condition of the Fisher problem at the nodes.
std::vector<double> initial_state(const EvolutionConfig& cfg, const SpectralGrid& grid);

/// Position x where u crosses level, taking the crossing with the largest x.
/// Bisection in s on the spectral interpolant of w plus the closed-form aux.
double front_position(std::span<const double> u, const SpectralGrid& grid,
                      const AuxDecomposition& decomp, double level = 0.5);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson_rho = 0.0;
  int samples = 0;
};

/// Least squares of ln x_half against t over t in [t0, t1].
RegressionResult fit_exponential(const FrontTrace& trace, double t0, double t1);

void write_snapshot_csv(const SpectralGrid& grid, std::span<const double> u, const std::string& path);

/// JSON summary {alpha, gamma, N, L, dt, slope, pearson_rho, samples, ...}.
void write_evolution_summary(const EvolutionConfig& cfg, const EvolutionResult& res,
                             const RegressionResult& fit, double t0, double t1,
                             const std::string& path);

} // namespace rfspec
