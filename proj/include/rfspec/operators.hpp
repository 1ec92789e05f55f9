#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfspec/basis.hpp"
#include "rfspec/closedform.hpp"
#include "rfspec/opmatrix.hpp"

namespace rfspec {

/// Split u = w + offset + scale·aux(x) so that w has equal limits at ±∞.
/// The constant offset is annihilated by every operator.
struct AuxDecomposition {
  ClosedFormFunction aux = ClosedFormFunction::Arctan;
  double scale = 0.0;
  double offset = 0.0;
  std::string description = "none";

  /// No auxiliary part (u already has equal limits).
  static AuxDecomposition none();
  /// Arctan decomposition for a function with limits u_minus and u_plus.
  static AuxDecomposition for_limits(double u_minus, double u_plus);

  double value(double x) const;
  double apply(const Operator& op, double x) const;
};

/// Throws DomainError unless u - aux part has equal limits at x = ±1e8 within 1e-6.
void check_decomposition(const std::function<double(double)>& u, const AuxDecomposition& d);

struct ApplyReport {
  SpectralGrid grid;
  std::vector<cplx> approx;
  std::optional<std::vector<double>> exact;
  std::optional<double> linf_error;
};

/// Operator values at the grid nodes of a function whose mapped samples
/// U(s_j) are periodic: analyze, Krasny filter, multiply.
std::vector<cplx> apply_periodic(std::span<const cplx> samples, const OperatorMatrix& matrix,
                                 const SpectralGrid& grid, double krasny_eps = kKrasnyEps,
                                 int jobs = 0);
std::vector<cplx> apply_periodic(std::span<const double> samples, const OperatorMatrix& matrix,
                                 const SpectralGrid& grid, double krasny_eps = kKrasnyEps,
                                 int jobs = 0);

/// op[u] = op[w] (spectral) + scale·op[aux] (closed form). When truth is
/// given the exact values and the L∞ error are filled in.
ApplyReport apply_with_aux(const std::function<double(double)>& u, const AuxDecomposition& decomp,
                           const OperatorMatrix& matrix, const SpectralGrid& grid,
                           std::optional<ClosedFormFunction> truth = std::nullopt, int jobs = 0);

/// Default decomposition for the registered test functions: erf uses
/// (2/π) arctan, arctan uses itself, ln(1+x²) none.
AuxDecomposition default_decomposition(ClosedFormFunction f);

/// Builds the matrix for (op, N, L, l_lim) and applies it to a registered function.
ApplyReport apply_closed_form(ClosedFormFunction f, const Operator& op, std::size_t n,
                              double l_scale, int l_lim = kDefaultLLim, int jobs = 0);

struct SweepResult {
  std::vector<std::size_t> n_list;
  std::vector<double> l_list;
  /// errors[i][j]: L∞ error for L = l_list[i], N = n_list[j].
  std::vector<std::vector<double>> errors;
};

/// L∞ error over an (L, N) grid. One base matrix per N; L cells in parallel.
SweepResult sweep_errors(ClosedFormFunction f, const Operator& op,
                         const std::vector<std::size_t>& n_list, const std::vector<double>& l_list,
                         int l_lim = kDefaultLLim, int jobs = 0);

/// CSV with header x,approx_re,approx_im,exact_re,exact_im,abs_err.
void write_apply_csv(const ApplyReport& report, const std::string& path);

/// CSV with one row per L and one column per N.
void write_sweep_csv(const SweepResult& sweep, const std::string& path);

} // namespace rfspec
