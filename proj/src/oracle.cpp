#include "rfspec/oracle.hpp"

#include <cmath>
#include <queue>
#include <vector>

#include "rfspec/basis.hpp"

namespace rfspec {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double s = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
    k += kWgk[i] * s;
    if (i % 2 == 1) g += kWg[i / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

// ∫_0^∞ h(z) z^{-β} dz with
//   h(z) = Σ_i c_i [u^{(d_i)}(x + σ_i z) - Σ_{j<q} (σ_i z)^j u^{(d_i + j)}(x) / j!],
// multiplied by pref.
struct Term {
  double c;
  int d;
  int sigma;
};

struct Form {
  std::vector<Term> terms;
  int q;
  double beta;
  double pref;
};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

class Integrand {
public:
  Integrand(const Form& form, const OracleFunction& u, double x, double taylor_radius)
      : form_(form), u_(u), x_(x), radius_(taylor_radius) {
    for (const Term& t : form_.terms)
      for (int j = 0; t.d + j <= 3; ++j)
        at_x_[t.d + j] = t.d + j <= u_.max_order() ? u_(x_, t.d + j) : std::nan("");
  }

  // h(z) / z^q
  double reduced(double z) const {
    if (z < radius_) {
      double s = 0.0;
      bool ok = true;
      for (const Term& t : form_.terms) {
        const int top = u_.max_order() - t.d;
        if (top < form_.q) ok = false;
        for (int j = form_.q; j <= top; ++j)
          s += t.c * std::pow(t.sigma, j) * std::pow(z, j - form_.q) * at_x_[t.d + j] / factorial(j);
      }
      if (ok) return s;
    }
    double s = 0.0;
    for (const Term& t : form_.terms) {
      double v = u_(x_ + t.sigma * z, t.d);
      for (int j = 0; j < form_.q; ++j)
        v -= std::pow(t.sigma * z, j) * at_x_[t.d + j] / factorial(j);
      s += t.c * v;
    }
    return s / std::pow(z, form_.q);
  }

  // Power growth of h at infinity: the highest subtracted Taylor power that
  // does not cancel, 0 for bounded differences of u, -1 when only
  // derivatives of u (assumed decaying) remain.
  int growth() const {
    for (int j = form_.q - 1; j >= 0; --j) {
      double coef = 0.0;
      for (const Term& t : form_.terms) coef += t.c * std::pow(t.sigma, j) * at_x_[t.d + j];
      if (std::abs(coef) > 0.0) return j;
    }
    for (const Term& t : form_.terms)
      if (t.d == 0) return 0;
    return -1;
  }

private:
  const Form& form_;
  const OracleFunction& u_;
  double x_;
  double radius_;
  double at_x_[4] = {0, 0, 0, 0};
};

QuadResult integrate_form(const Form& form, const OracleFunction& u, double x,
                          const QuadratureConfig& cfg) {
  const Integrand h(form, u, x, cfg.taylor_radius);
  const double a = cfg.split_point;
  const double q = form.q;
  const double beta = form.beta;

  // [0, a]: z = a t^r makes z^{q-β} dz regular at t = 0.
  const double r = 1.0 / (q - beta + 1.0);
  const double scale0 = std::pow(a, 1.0 + q - beta) * r;
  auto f0 = [&](double t) {
    const double z = a * std::pow(t, r);
    return z > 0.0 ? h.reduced(z) * scale0 : 0.0;
  };

  // [a, T]: z = a σ^{-1/p} flattens the algebraic decay h z^{-β} ~ z^{g-β}.
  const int g = h.growth();
  const double p = std::max(beta - g - 1.0, 0.25);
  double tail = cfg.tail_cut;
  if (tail <= 0.0) {
    tail = std::numeric_limits<double>::infinity();
    bool plain = g == 0 && std::isfinite(u.sup_norm);
    double csum = 0.0;
    for (const Term& t : form.terms) {
      plain = plain && t.d == 0;
      csum += std::abs(t.c);
    }
    if (plain) {
      const double bound = 2.0 * u.sup_norm * csum * std::abs(form.pref);
      tail = std::pow(10.0 * bound / (p * cfg.abs_tol), 1.0 / p);
    }
  }
  const double sigma_t = std::isfinite(tail) ? std::pow(a / tail, p) : 0.0;
  auto f1 = [&](double s) {
    const double z = a * std::pow(s, -1.0 / p);
    if (!std::isfinite(z)) return 0.0;
    const double hz = h.reduced(z) * std::pow(z, q);
    return hz * std::pow(z, -beta) * (a / p) * std::pow(s, -1.0 / p - 1.0);
  };

  const double tol = 0.5 * cfg.abs_tol / std::max(std::abs(form.pref), 1e-300);
  QuadResult r0 = integrate_gk15(f0, 0.0, 1.0, tol, cfg.rel_tol, cfg.max_subdivisions);
  QuadResult r1 = integrate_gk15(f1, sigma_t, 1.0, tol, cfg.rel_tol, cfg.max_subdivisions);
  return {form.pref * (r0.value + r1.value),
          std::abs(form.pref) * (r0.error_estimate + r1.error_estimate),
          r0.evaluations + r1.evaluations};
}

Form make_form(const Operator& op, Representation rep) {
  const double a = op.alpha;
  const bool deriv = rep == Representation::Derivative;
  switch (op.kind) {
  case OperatorKind::WeylRight:
    return deriv ? Form{{{1, 1, -1}}, 0, a, rgamma(1 - a)} : Form{{{1, 0, -1}}, 1, 1 + a, rgamma(-a)};
  case OperatorKind::WeylLeftNeg:
    return deriv ? Form{{{1, 1, +1}}, 0, a, rgamma(1 - a)} : Form{{{1, 0, +1}}, 1, 1 + a, -rgamma(-a)};
  case OperatorKind::DxWeylRight: {
    const double b = a - 1;
    return deriv ? Form{{{1, 2, -1}}, 0, b, rgamma(1 - b)} : Form{{{1, 0, -1}}, 2, 2 + b, rgamma(-1 - b)};
  }
  case OperatorKind::DxWeylLeftNeg: {
    const double b = a - 1;
    return deriv ? Form{{{1, 2, +1}}, 0, b, rgamma(1 - b)} : Form{{{1, 0, +1}}, 2, 2 + b, rgamma(-1 - b)};
  }
  case OperatorKind::RieszFeller: {
    const RieszFellerCoeffs c = rf_coeffs(a, op.gamma);
    if (a < 1.0)
      return deriv ? Form{{{c.c1, 1, -1}, {-c.c2, 1, +1}}, 0, a, -1.0 / a}
                   : Form{{{c.c1, 0, -1}, {c.c2, 0, +1}}, 1, 1 + a, 1.0};
    return deriv ? Form{{{c.c1, 2, -1}, {c.c2, 2, +1}}, 0, a - 1, gamma(-a) * rgamma(2 - a)}
                 : Form{{{c.c1, 0, -1}, {c.c2, 0, +1}}, 2, 1 + a, 1.0};
  }
  case OperatorKind::FracLaplacian: {
    const double ca = c_alpha(a);
    return deriv ? Form{{{1, 1, -1}, {-1, 1, +1}}, 1, a, ca / a}
                 : Form{{{-1, 0, +1}, {-1, 0, -1}}, 2, 1 + a, ca};
  }
  }
  throw DomainError("quad_operator: unknown operator kind");
}

} // namespace

double OracleFunction::operator()(double x, int order) const {
  if (order < 0 || order > 3 || !derivs[static_cast<std::size_t>(order)])
    throw DomainError("oracle function '" + name + "' lacks derivative of order " +
                      std::to_string(order));
  return derivs[static_cast<std::size_t>(order)](x);
}

int OracleFunction::max_order() const {
  int m = -1;
  while (m < 3 && derivs[static_cast<std::size_t>(m + 1)]) ++m;
  return m;
}

OracleFunction oracle_function(ClosedFormFunction f) {
  OracleFunction u;
  for (int k = 0; k < 4; ++k) u.derivs[static_cast<std::size_t>(k)] = [f, k](double x) { return closed_form_value(f, x, k); };
  const auto lim = closed_form_limits(f);
  u.sup_norm = std::max(std::abs(lim.first), std::abs(lim.second));
  u.name = to_string(f);
  return u;
}

OracleFunction higgins_part(int k, double l_scale, ComplexPart part) {
  // λ(x) = e^{2ik arccot(x/L)}: λ' = fλ with f = -2ik L/(L^2 + x^2).
  auto pick = [part](cplx v) { return part == ComplexPart::Real ? v.real() : v.imag(); };
  const double L = l_scale;
  const cplx ik(0.0, k);
  OracleFunction u;
  u.derivs[0] = [=](double x) { return pick(lambda_k(x, k, L)); };
  u.derivs[1] = [=](double x) {
    const cplx f = -2.0 * ik * L / (L * L + x * x);
    return pick(f * lambda_k(x, k, L));
  };
  u.derivs[2] = [=](double x) {
    const double q = L * L + x * x;
    const cplx f = -2.0 * ik * L / q, f1 = 4.0 * ik * L * x / (q * q);
    return pick((f1 + f * f) * lambda_k(x, k, L));
  };
  u.derivs[3] = [=](double x) {
    const double q = L * L + x * x;
    const cplx f = -2.0 * ik * L / q, f1 = 4.0 * ik * L * x / (q * q);
    const cplx f2 = 4.0 * ik * L * (L * L - 3.0 * x * x) / (q * q * q);
    return pick((f2 + 3.0 * f * f1 + f * f * f) * lambda_k(x, k, L));
  };
  u.sup_norm = 1.0;
  u.name = std::string(part == ComplexPart::Real ? "Re" : "Im") + " lambda_" + std::to_string(k);
  return u;
}

QuadResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol, int max_subdivisions) {
  std::priority_queue<Panel> heap;
  Panel first = gk15(f, a, b);
  double total = first.value, err = first.error;
  heap.push(first);
  int evals = 15, panels = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (panels >= max_subdivisions)
      throw ConvergenceError("quadrature did not converge: estimate " + std::to_string(total) +
                                 " with error " + std::to_string(err) + " after " +
                                 std::to_string(panels) + " panels",
                             {total, err, evals});
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel l = gk15(f, worst.a, mid), r = gk15(f, mid, worst.b);
    evals += 30;
    ++panels;
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    if (mid <= worst.a || mid >= worst.b) break; // interval exhausted in double precision
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  err = 0.0;
  for (; !heap.empty(); heap.pop()) {
    total += heap.top().value;
    err += heap.top().error;
  }
  return {total, err, evals};
}

QuadResult quad_operator(const Operator& op, const OracleFunction& u, double x,
                         const QuadratureConfig& cfg, Representation rep) {
  op.validate();
  if (!(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0 && cfg.split_point > 0.0))
    throw DomainError("quad_operator: tolerances and split point must be positive");
  if (op.kind == OperatorKind::RieszFeller && op.alpha == 1.0) {
    const QuadResult fl = quad_operator({OperatorKind::FracLaplacian, 1.0, 0.0}, u, x, cfg, rep);
    const double c = std::cos(op.gamma * kPi / 2), s = std::sin(op.gamma * kPi / 2);
    return {-c * fl.value + s * u(x, 1), std::abs(c) * fl.error_estimate, fl.evaluations};
  }
  Representation r = rep;
  if (r == Representation::Default)
    r = (op.kind == OperatorKind::WeylRight || op.kind == OperatorKind::WeylLeftNeg)
            ? Representation::Derivative
            : Representation::Difference;
  return integrate_form(make_form(op, r), u, x, cfg);
}

} // namespace rfspec
