#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rfspec {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// log|Γ(x)| together with the sign of Γ(x).
struct SignedLogGamma {
  double log_abs;
  int sign;

  double value() const;
};

/// Γ(x). Throws DomainError at the poles x = 0, -1, -2, ...
double gamma(double x);

/// 1/Γ(x), equal to 0 at the poles.
double rgamma(double x);

SignedLogGamma signed_lgamma(double x);

/// Pochhammer symbol (a)_n = a (a+1) ... (a+n-1).
double pochhammer(double a, int n);

/// Normalising constant of the singular-integral fractional Laplacian,
/// α 2^{α-1} Γ(1/2 + α/2) / (√π Γ(1 - α/2)), α in (0,2).
double c_alpha(double alpha);

/// Kernel weights of the Riesz-Feller integral representation.
struct RieszFellerCoeffs {
  double c1;
  double c2;
  double alpha;
  double gamma;
};

/// Throws DomainError unless |gamma| <= min(alpha, 2 - alpha).
void check_skewness(double alpha, double gamma);

RieszFellerCoeffs rf_coeffs(double alpha, double gamma);

/// 2F1(-m, 1+α; c; z) as a finite sum in ascending n. c must be 1 or 2.
cplx hyp2f1_terminating(int m, double alpha, cplx z, int c = 2);

/// Kummer's confluent hypergeometric function 1F1(a; b; x) for real x <= 0
/// (small positive x is also accepted and summed directly).
double kummer_1f1(double a, double b, double x);

enum class RatioKind { V1, V2 };

/// Γ(a + p)/Γ(b + p) for p = 0..p_max, with (a, b) = ((-1+α)/2, (3-α)/2)
/// for V1 and ((-1-α)/2, (3+α)/2) for V2. Built by the forward recurrence.
struct RatioTable {
  double alpha;
  RatioKind kind;
  std::vector<double> values;

  double operator[](std::size_t p) const { return values[p]; }
  std::size_t size() const { return values.size(); }
};

RatioTable ratio_table(double alpha, RatioKind kind, std::size_t p_max);

} // namespace rfspec
