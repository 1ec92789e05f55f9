#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rfspec/basis.hpp"
#include "rfspec/closedform.hpp"

namespace rfspec {

/// N×N operational matrix mapping coefficients (DFT ordering) to nodal
/// operator values. Row-major.
struct OperatorMatrix {
  OperatorKind kind = OperatorKind::FracLaplacian;
  double alpha = 1.0;
  double gamma = 0.0;
  double l_scale = 1.0;
  int l_lim = 0;
  std::size_t n = 0;
  std::vector<cplx> entries;

  cplx operator()(std::size_t row, std::size_t col) const { return entries[row * n + col]; }
  cplx& operator()(std::size_t row, std::size_t col) { return entries[row * n + col]; }

  /// Unscaled (-Δ)^{α/2} matrix for L = 1, as produced by build_base_matrix.
  bool is_base() const { return kind == OperatorKind::FracLaplacian && l_scale == 1.0; }
  Operator op() const { return {kind, alpha, gamma}; }
};

inline constexpr int kDefaultLLim = 100;

struct BuildOptions {
  /// Upper bound on N·N·(2 l_lim + 1); exceeding it raises BudgetError.
  double max_work_units = 1e11;
  /// Upper bound on the matrix storage in bytes.
  double max_bytes = 4.6e9;
  /// OpenMP thread count; 0 keeps the runtime default.
  int jobs = 0;
};

/// Work units N·N·(2 l_lim + 1) charged by build_base_matrix.
double build_work_units(std::size_t n, int l_lim);

/// (-Δ)^{α/2} operational matrix for L = 1. Columns k = 1..ceil(N/2)-1 are
/// built with one inverse FFT each; the rest follows by conjugation.
OperatorMatrix build_base_matrix(double alpha, std::size_t n, int l_lim = kDefaultLLim,
                                 const BuildOptions& opts = {});

/// Serial direct evaluation of every entry: no FFT, no aliasing fold, no
/// symmetry. Negative modes use the reflected truncation window.
OperatorMatrix build_base_matrix_reference(double alpha, std::size_t n, int l_lim = kDefaultLLim);

/// Divides by L^α and applies the phase rule of kind to every column. Pass an
/// rvalue to scale in place.
OperatorMatrix scale_to_operator(OperatorMatrix base, OperatorKind kind, double gamma,
                                 double l_scale);

/// Matrix-vector product, parallel over rows.
std::vector<cplx> apply(const OperatorMatrix& m, const CoeffVector& coeffs, int jobs = 0);

/// Serial matrix-vector product with the same per-row summation order.
std::vector<cplx> apply_reference(const OperatorMatrix& m, const CoeffVector& coeffs);

inline constexpr std::uint32_t kMatrixFormatVersion = 1;
inline constexpr std::size_t kMatrixHeaderBytes = 44;

void serialize(const OperatorMatrix& m, std::ostream& out);
OperatorMatrix deserialize(std::istream& in);

void save_matrix(const OperatorMatrix& m, const std::string& path);
OperatorMatrix load_matrix(const std::string& path);

} // namespace rfspec
