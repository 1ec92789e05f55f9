#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>

#include "rfspec/closedform.hpp"
#include "rfspec/errors.hpp"

namespace rfspec {

/// A real function with derivatives up to order 3. Missing higher
/// derivatives shorten the Taylor expansion used near the singularity.
struct OracleFunction {
  std::array<std::function<double(double)>, 4> derivs;
  double sup_norm = std::numeric_limits<double>::infinity();
  std::string name;

  double operator()(double x, int order = 0) const;
  int max_order() const;
};

OracleFunction oracle_function(ClosedFormFunction f);

enum class ComplexPart { Real, Imag };

/// Real or imaginary part of λ_k(x/L).
OracleFunction higgins_part(int k, double l_scale, ComplexPart part);

struct QuadratureConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double split_point = 1.0;
  /// Upper truncation T of the half-line. 0 selects T from the tail bound
  /// when u is bounded and infinity (compactified) otherwise.
  double tail_cut = 0.0;
  int max_subdivisions = 4000;
  /// Below this z the integrand numerator is replaced by its Taylor series.
  double taylor_radius = 1e-4;
};

enum class Representation {
  Default,
  Derivative, // u' (Weyl) or u'' (∂x Weyl) or u' difference (fractional Laplacian)
  Difference, // first/second order difference quotients of u
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

class ConvergenceError : public NumericError {
public:
  ConvergenceError(const std::string& what, QuadResult achieved)
      : NumericError(what), achieved_(achieved) {}
  const QuadResult& achieved() const { return achieved_; }

private:
  QuadResult achieved_;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
QuadResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_subdivisions);

/// op[u](x) from the defining singular integral.
QuadResult quad_operator(const Operator& op, const OracleFunction& u, double x,
                         const QuadratureConfig& cfg = {},
                         Representation rep = Representation::Default);

} // namespace rfspec
