#pragma once

#include <string>
#include <utility>

#include "rfspec/specfun.hpp"

namespace rfspec {

enum class OperatorKind {
  WeylRight,     // 𝒟^α, α in (0,1)
  WeylLeftNeg,   // 𝒟̄^α, α in (0,1)
  DxWeylRight,   // ∂x 𝒟^{α-1}, α in (1,2)
  DxWeylLeftNeg, // ∂x 𝒟̄^{α-1}, α in (1,2)
  RieszFeller,   // D_γ^α, α in (0,2), |γ| <= min(α, 2-α)
  FracLaplacian, // (-Δ)^{α/2}, α in (0,2)
};

/// An operator kind together with its order and (Riesz-Feller only) skewness.
struct Operator {
  OperatorKind kind = OperatorKind::FracLaplacian;
  double alpha = 1.0;
  double gamma = 0.0;

  /// Throws DomainError if alpha/gamma are not admissible for kind.
  void validate() const;
};

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

/// Multipliers relating an operator applied to λ_k to (-Δ)^{α/2}λ_k.
/// neg_factor is always conj(pos_factor).
struct PhaseRule {
  cplx pos_factor;
  cplx neg_factor;

  cplx for_mode(int k) const { return k > 0 ? pos_factor : (k < 0 ? neg_factor : cplx{0.0}); }
};

PhaseRule phase_rule(const Operator& op);

/// (-Δ)^{α/2} λ_k(x) with L = 1.
cplx frac_lap_lambda(double alpha, int k, double x);

/// op[λ_k](x) with L = 1.
cplx op_lambda(const Operator& op, int k, double x);

struct SeriesValue {
  cplx value;
  double tail_estimate = 0.0;
};

/// (-Δ)^{α/2} λ_k(cot s) from the Γ-ratio series truncated to |l| <= l_max.
/// For α = 1 the closed form is returned with zero tail.
SeriesValue frac_lap_lambda_s(double alpha, int k, double s, int l_max);

/// (-Δ)^{α/2} μ_k(x).
cplx frac_lap_mu(double alpha, int k, double x);

/// op[μ_k](x). Mode k = 0 takes the positive phase factor.
cplx op_mu(const Operator& op, int k, double x);

/// (-Δ)^{1/2} φ_k(cot s) for odd k.
cplx half_lap_phi_odd(int k, double s);

/// D^1_γ φ_k(cot s) for odd k, |γ| <= 1.
cplx d1gamma_phi_odd(int k, double gamma, double s);

struct WeylAtZero {
  cplx right;   // 𝒟^α φ_k(0)
  cplx left;    // 𝒟̄^α φ_k(0)
  cplx fraclap; // (-Δ)^{α/2} φ_k(0)
};

/// Values at x = 0 for odd k > 0 and α in (0,1).
WeylAtZero weyl_phi_at_zero(double alpha, int k);

enum class ClosedFormFunction { Arctan, Erf, Log1pSq };

std::string to_string(ClosedFormFunction f);
ClosedFormFunction closed_form_function_from_string(const std::string& name);

/// u(x) and its first three derivatives (order 0..3).
double closed_form_value(ClosedFormFunction f, double x, int order = 0);

/// Limits of u at -∞ and +∞. Log1pSq is unbounded and reports +∞ for both.
std::pair<double, double> closed_form_limits(ClosedFormFunction f);

/// Exact op[u](x).
double reference_operator(ClosedFormFunction f, const Operator& op, double x);

} // namespace rfspec
