#include "rfspec/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rfspec/errors.hpp"

namespace rfspec {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// Asymptotic expansion of 1F1(a; b; -y) for large y, dropping the
// exponentially small e^{-y} branch.
double kummer_asymptotic(double a, double b, double y) {
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 1000; ++s) {
    term *= (a + s) * (a - b + 1.0 + s) / ((s + 1.0) * y);
    const double mag = std::abs(term);
    if (mag > prev) break; // optimal truncation reached
    sum += term;
    if (mag <= 1e-17 * std::abs(sum)) break;
    prev = mag;
  }
  return gamma(b) * rgamma(b - a) * std::pow(y, -a) * sum;
}

double kummer_series(double a, double b, double x, int max_terms) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < max_terms; ++n) {
    term *= (a + n) / (b + n) * x / (n + 1.0);
    sum += term;
    if (term == 0.0 || std::abs(term) <= 1e-17 * std::abs(sum)) return sum;
  }
  throw NumericError("kummer_1f1: series did not converge within " +
                     std::to_string(max_terms) + " terms");
}

} // namespace

double SignedLogGamma::value() const { return sign * std::exp(log_abs); }

double gamma(double x) {
  if (is_nonpositive_integer(x))
    throw DomainError("gamma: pole at x = " + std::to_string(x));
  return std::tgamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

SignedLogGamma signed_lgamma(double x) {
  if (is_nonpositive_integer(x))
    throw DomainError("signed_lgamma: pole at x = " + std::to_string(x));
  int sign = 1;
  const double la = ::lgamma_r(x, &sign);
  return {la, sign < 0 ? -1 : 1};
}

double pochhammer(double a, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= a + i;
  return p;
}

double c_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("c_alpha: alpha must lie in (0,2)");
  return alpha * std::exp2(alpha - 1.0) * gamma(0.5 + 0.5 * alpha) /
         (std::sqrt(kPi) * gamma(1.0 - 0.5 * alpha));
}

void check_skewness(double alpha, double gamma) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("alpha must lie in (0,2), got " + std::to_string(alpha));
  const double bound = std::min(alpha, 2.0 - alpha);
  if (!(std::abs(gamma) <= bound * (1.0 + 1e-14)))
    throw DomainError("skewness |gamma| = " + std::to_string(std::abs(gamma)) +
                      " exceeds min(alpha, 2 - alpha) = " + std::to_string(bound));
}

RieszFellerCoeffs rf_coeffs(double alpha, double gamma_) {
  check_skewness(alpha, gamma_);
  const double g = gamma(1.0 + alpha) / kPi;
  return {g * std::sin((alpha - gamma_) * kPi / 2), g * std::sin((alpha + gamma_) * kPi / 2),
          alpha, gamma_};
}

cplx hyp2f1_terminating(int m, double alpha, cplx z, int c) {
  if (m < 0) throw DomainError("hyp2f1_terminating: m must be nonnegative");
  if (c != 1 && c != 2) throw DomainError("hyp2f1_terminating: c must be 1 or 2");
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int n = 0; n < m; ++n) {
    const double ratio = (n - m) * (1.0 + alpha + n) / ((c + n) * (n + 1.0));
    term = term * ratio * z;
    sum += term;
  }
  return sum;
}

double kummer_1f1(double a, double b, double x) {
  if (is_nonpositive_integer(b)) throw DomainError("kummer_1f1: b is a nonpositive integer");
  constexpr int kMaxTerms = 20000;
  if (x == 0.0) return 1.0;
  if (a == b) return std::exp(x);
  if (x > 0.0 || is_nonpositive_integer(a)) return kummer_series(a, b, x, kMaxTerms);

  const double y = -x;
  // Kummer transformation: 1F1(a;b;-y) = e^{-y} 1F1(b-a; b; y). Exact
  // (terminating) when b - a is a nonpositive integer.
  if (is_nonpositive_integer(b - a)) return std::exp(x) * kummer_series(b - a, b, y, kMaxTerms);
  if (y <= 1.0) return kummer_series(a, b, x, kMaxTerms);
  if (y <= 60.0) return std::exp(x) * kummer_series(b - a, b, y, kMaxTerms);
  return kummer_asymptotic(a, b, y);
}

RatioTable ratio_table(double alpha, RatioKind kind, std::size_t p_max) {
  if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0)
    throw DomainError("ratio_table: alpha must lie in (0,1) U (1,2)");
  const double sgn = kind == RatioKind::V1 ? 1.0 : -1.0;
  const double a = (-1.0 + sgn * alpha) / 2.0;
  const double b = (3.0 - sgn * alpha) / 2.0;
  RatioTable t{alpha, kind, std::vector<double>(p_max + 1)};
  t.values[0] = gamma(a) / gamma(b);
  for (std::size_t p = 0; p < p_max; ++p)
    t.values[p + 1] = t.values[p] * (a + static_cast<double>(p)) / (b + static_cast<double>(p));
  return t;
}

} // namespace rfspec
