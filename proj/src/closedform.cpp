#include "rfspec/closedform.hpp"

#include <cmath>
#include <limits>

#include "rfspec/basis.hpp"
#include "rfspec/errors.hpp"

namespace rfspec {

namespace {

cplx unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

int sgn(int k) { return (k > 0) - (k < 0); }

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("alpha must lie in (0,2), got " + std::to_string(alpha));
}

void require_odd(int k, const char* who) {
  if (k % 2 == 0) throw DomainError(std::string(who) + ": k must be odd");
}

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

} // namespace

void Operator::validate() const {
  switch (kind) {
  case OperatorKind::WeylRight:
  case OperatorKind::WeylLeftNeg:
    if (!(alpha > 0.0 && alpha < 1.0))
      throw DomainError(to_string(kind) + " requires alpha in (0,1), got " + std::to_string(alpha));
    break;
  case OperatorKind::DxWeylRight:
  case OperatorKind::DxWeylLeftNeg:
    if (!(alpha > 1.0 && alpha < 2.0))
      throw DomainError(to_string(kind) + " requires alpha in (1,2), got " + std::to_string(alpha));
    break;
  case OperatorKind::RieszFeller:
    check_skewness(alpha, gamma);
    break;
  case OperatorKind::FracLaplacian:
    require_alpha(alpha);
    break;
  }
}

std::string to_string(OperatorKind kind) {
  switch (kind) {
  case OperatorKind::WeylRight: return "WeylRight";
  case OperatorKind::WeylLeftNeg: return "WeylLeftNeg";
  case OperatorKind::DxWeylRight: return "DxWeylRight";
  case OperatorKind::DxWeylLeftNeg: return "DxWeylLeftNeg";
  case OperatorKind::RieszFeller: return "RieszFeller";
  case OperatorKind::FracLaplacian: return "FracLaplacian";
  }
  return "?";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  for (auto k : {OperatorKind::WeylRight, OperatorKind::WeylLeftNeg, OperatorKind::DxWeylRight,
                 OperatorKind::DxWeylLeftNeg, OperatorKind::RieszFeller,
                 OperatorKind::FracLaplacian})
    if (to_string(k) == name) return k;
  throw DomainError("unknown operator kind '" + name + "'");
}

PhaseRule phase_rule(const Operator& op) {
  op.validate();
  const double h = op.alpha * kPi / 2;
  cplx pos;
  switch (op.kind) {
  case OperatorKind::WeylRight:
  case OperatorKind::DxWeylRight: pos = unit(-h); break;
  case OperatorKind::WeylLeftNeg: pos = -unit(h); break;
  case OperatorKind::DxWeylLeftNeg: pos = unit(h); break;
  case OperatorKind::RieszFeller: pos = -unit(op.gamma * kPi / 2); break;
  case OperatorKind::FracLaplacian: pos = 1.0; break;
  }
  return {pos, std::conj(pos)};
}

cplx frac_lap_lambda(double alpha, int k, double x) {
  require_alpha(alpha);
  if (k == 0) return 0.0;
  const int m = std::abs(k);
  if (alpha == 1.0) {
    const double s = arccot(x);
    const double sin2 = std::sin(s) * std::sin(s);
    return 2.0 * m * sin2 * unit(2.0 * k * s);
  }
  const cplx z(1.0, x);
  const cplx v = -2.0 * m * gamma(1.0 + alpha) * std::pow(z, -(1.0 + alpha)) *
                 hyp2f1_terminating(m - 1, alpha, 2.0 / z, 2);
  return k > 0 ? v : std::conj(v);
}

cplx op_lambda(const Operator& op, int k, double x) {
  if (k == 0) {
    op.validate();
    return 0.0;
  }
  return phase_rule(op).for_mode(k) * frac_lap_lambda(op.alpha, k, x);
}

SeriesValue frac_lap_lambda_s(double alpha, int k, double s, int l_max) {
  require_alpha(alpha);
  if (!(s > 0.0 && s < kPi)) throw DomainError("frac_lap_lambda_s: s must lie in (0, pi)");
  if (k == 0) return {0.0, 0.0};
  if (alpha == 1.0) {
    const double sn = std::sin(s);
    return {2.0 * std::abs(k) * sn * sn * unit(2.0 * k * s), 0.0};
  }
  if (l_max < std::abs(k)) throw DomainError("frac_lap_lambda_s: l_max must be >= |k|");
  const auto p_max = static_cast<std::size_t>(l_max + std::abs(k));
  const RatioTable v1 = ratio_table(alpha, RatioKind::V1, p_max);
  const RatioTable v2 = ratio_table(alpha, RatioKind::V2, p_max);
  const double kk = k;
  auto term = [&](int l) {
    const double w = ((1.0 - alpha) * kk * kk - 2.0 * kk * l) * v1[std::abs(l)] *
                     v2[std::abs(k - l)];
    return w * unit(2.0 * l * s);
  };
  cplx sum = 0.0;
  for (int l = -l_max; l <= l_max; ++l) sum += term(l);
  const double pref = c_alpha(alpha) * std::pow(std::sin(s), alpha - 1.0) /
                      (2.0 * std::tan(alpha * kPi / 2));
  // Σ_{l > l_max} e^{2ils} t_l with |t_l| decreasing is bounded by
  // |t_{l_max}| / |1 - e^{2is}| = |t_{l_max}| / (2 sin s).
  const double tail =
      std::abs(pref) * (std::abs(term(l_max)) + std::abs(term(-l_max))) / (2.0 * std::sin(s));
  return {pref * sum, tail};
}

cplx frac_lap_mu(double alpha, int k, double x) {
  require_alpha(alpha);
  const double g = gamma(1.0 + alpha);
  if (k >= 0) {
    const cplx z(1.0, x);
    return g * std::pow(z, -(1.0 + alpha)) * hyp2f1_terminating(k, alpha, 2.0 / z, 1);
  }
  const cplx z(1.0, -x);
  return -g * std::pow(z, -(1.0 + alpha)) * hyp2f1_terminating(-k - 1, alpha, 2.0 / z, 1);
}

cplx op_mu(const Operator& op, int k, double x) {
  const PhaseRule rule = phase_rule(op);
  return (k >= 0 ? rule.pos_factor : rule.neg_factor) * frac_lap_mu(op.alpha, k, x);
}

cplx half_lap_phi_odd(int k, double s) {
  require_odd(k, "half_lap_phi_odd");
  if (!(s > 0.0 && s < kPi)) throw DomainError("half_lap_phi_odd: s must lie in (0, pi)");
  const int sg = sgn(k);
  const int m = std::abs(k);
  const double sn = std::sin(s);
  // ln(cot(s/2)) = asinh(cot s), finite for every s in (0, π)
  cplx bracket = std::cos(s) + sn * sn * std::asinh(1.0 / std::tan(s));
  for (int n = 0; n <= (m - 1) / 2; ++n) {
    const double d = (2.0 * n - 1.0) * (2.0 * n + 1.0) * (2.0 * n + 3.0);
    bracket += 4.0 * unit(-sg * (2.0 * n + 1.0) * s) / d;
  }
  const cplx i(0.0, 1.0);
  return -2.0 * i * static_cast<double>(sg) / (kPi * (2.0 + m)) -
         2.0 * i * static_cast<double>(k) * unit(k * s) / kPi * bracket;
}

cplx d1gamma_phi_odd(int k, double gamma_, double s) {
  if (!(std::abs(gamma_) <= 1.0)) throw DomainError("d1gamma_phi_odd: |gamma| must be <= 1");
  const double sn = std::sin(s);
  const cplx dphi = cplx(0.0, -k) * sn * sn * unit(k * s);
  return -std::cos(gamma_ * kPi / 2) * half_lap_phi_odd(k, s) + std::sin(gamma_ * kPi / 2) * dphi;
}

WeylAtZero weyl_phi_at_zero(double alpha, int k) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("weyl_phi_at_zero: alpha must lie in (0,1)");
  if (k <= 0) throw DomainError("weyl_phi_at_zero: k must be positive");
  require_odd(k, "weyl_phi_at_zero");
  const cplx i(0.0, 1.0);
  cplx sum_r = 0.0, sum_l = 0.0;
  double sum_f = 0.0;
  cplx ipow = 1.0;
  for (int n = 0; n <= k; ++n) {
    const double w = binomial(k, n) * gamma((1.0 + alpha + k - n) / 2) * gamma((1.0 - alpha + n) / 2);
    sum_r += ipow * w;
    sum_l += std::conj(ipow) * w;
    sum_f += std::round(ipow.imag()) * w; // sin(nπ/2)
    ipow *= i;
  }
  const cplx ik = std::pow(i, k);
  const double pre = k / (2.0 * gamma(1.0 - alpha) * gamma(1.0 + k / 2.0));
  WeylAtZero out;
  out.right = -ik * i * pre * sum_r;
  out.left = -ik * i * pre * sum_l;
  out.fraclap = ik * std::exp2(alpha) * gamma((1.0 + alpha) / 2) /
                (std::sqrt(kPi) * gamma(k / 2.0) * gamma(1.0 - alpha / 2)) * sum_f;
  return out;
}

std::string to_string(ClosedFormFunction f) {
  switch (f) {
  case ClosedFormFunction::Arctan: return "arctan";
  case ClosedFormFunction::Erf: return "erf";
  case ClosedFormFunction::Log1pSq: return "log1psq";
  }
  return "?";
}

ClosedFormFunction closed_form_function_from_string(const std::string& name) {
  for (auto f : {ClosedFormFunction::Arctan, ClosedFormFunction::Erf, ClosedFormFunction::Log1pSq})
    if (to_string(f) == name) return f;
  throw DomainError("unknown function '" + name + "'");
}

double closed_form_value(ClosedFormFunction f, double x, int order) {
  const double q = 1.0 + x * x;
  switch (f) {
  case ClosedFormFunction::Arctan:
    switch (order) {
    case 0: return std::atan(x);
    case 1: return 1.0 / q;
    case 2: return -2.0 * x / (q * q);
    case 3: return (6.0 * x * x - 2.0) / (q * q * q);
    }
    break;
  case ClosedFormFunction::Erf: {
    if (order == 0) return std::erf(x);
    const double d1 = 2.0 / std::sqrt(kPi) * std::exp(-x * x);
    switch (order) {
    case 1: return d1;
    case 2: return -2.0 * x * d1;
    case 3: return (4.0 * x * x - 2.0) * d1;
    }
    break;
  }
  case ClosedFormFunction::Log1pSq:
    switch (order) {
    case 0: return std::log1p(x * x);
    case 1: return 2.0 * x / q;
    case 2: return 2.0 * (1.0 - x * x) / (q * q);
    case 3: return 4.0 * x * (x * x - 3.0) / (q * q * q);
    }
    break;
  }
  throw DomainError("closed_form_value: derivative order must be 0..3");
}

std::pair<double, double> closed_form_limits(ClosedFormFunction f) {
  switch (f) {
  case ClosedFormFunction::Arctan: return {-kPi / 2, kPi / 2};
  case ClosedFormFunction::Erf: return {-1.0, 1.0};
  case ClosedFormFunction::Log1pSq: break;
  }
  const double inf = std::numeric_limits<double>::infinity();
  return {inf, inf};
}

double reference_operator(ClosedFormFunction f, const Operator& op, double x) {
  op.validate();
  const double a = op.alpha;
  const double h = a * kPi / 2;
  const double hg = op.gamma * kPi / 2;
  if (f == ClosedFormFunction::Erf) {
    const double p = std::exp2(a) / kPi * gamma(a / 2) * kummer_1f1(a / 2, 0.5, -x * x);
    const double q = std::exp2(1.0 + a) / kPi * gamma((1.0 + a) / 2) * x *
                     kummer_1f1((1.0 + a) / 2, 1.5, -x * x);
    switch (op.kind) {
    case OperatorKind::WeylRight:
    case OperatorKind::DxWeylRight: return std::sin(h) * p + std::cos(h) * q;
    case OperatorKind::WeylLeftNeg: return std::sin(h) * p - std::cos(h) * q;
    case OperatorKind::DxWeylLeftNeg: return -std::sin(h) * p + std::cos(h) * q;
    case OperatorKind::RieszFeller: return std::sin(hg) * p - std::cos(hg) * q;
    case OperatorKind::FracLaplacian: return q;
    }
  }
  const double at = std::atan(x);
  const double g = gamma(a) * std::pow(1.0 + x * x, -a / 2);
  if (f == ClosedFormFunction::Arctan) {
    switch (op.kind) {
    case OperatorKind::WeylRight:
    case OperatorKind::DxWeylRight: return g * std::sin(h + a * at);
    case OperatorKind::WeylLeftNeg: return g * std::sin(h - a * at);
    case OperatorKind::DxWeylLeftNeg: return -g * std::sin(h - a * at);
    case OperatorKind::RieszFeller: return g * std::sin(hg - a * at);
    case OperatorKind::FracLaplacian: return g * std::sin(a * at);
    }
  }
  switch (op.kind) {
  case OperatorKind::WeylRight:
  case OperatorKind::DxWeylRight: return -2.0 * g * std::cos(h + a * at);
  case OperatorKind::WeylLeftNeg: return 2.0 * g * std::cos(h - a * at);
  case OperatorKind::DxWeylLeftNeg: return -2.0 * g * std::cos(h - a * at);
  case OperatorKind::RieszFeller: return 2.0 * g * std::cos(hg - a * at);
  case OperatorKind::FracLaplacian: return -2.0 * g * std::cos(a * at);
  }
  throw DomainError("reference_operator: unsupported combination");
}

} // namespace rfspec
