#include "rfspec/basis.hpp"

#include <string>

#include "rfspec/errors.hpp"
#include "rfspec/fft.hpp"

namespace rfspec {

namespace {

cplx unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

void krasny(CoeffVector& c, double eps) {
  for (auto& v : c.coeffs)
    if (std::abs(v) <= eps) v = 0.0;
}

// Scale raw DFT output into pseudospectral coefficients in place.
void phase_correct(std::vector<cplx>& dft) {
  const std::size_t n = dft.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = mode_of(i, n).k;
    dft[i] *= unit(-kPi * k * inv_n) * inv_n;
  }
}

} // namespace

SpectralGrid make_grid(std::size_t n, double l_scale) {
  if (n < 2) throw DomainError("make_grid: N must be at least 2");
  if (!(l_scale > 0.0) || !std::isfinite(l_scale))
    throw DomainError("make_grid: L must be positive and finite");
  SpectralGrid g;
  g.n = n;
  g.l_scale = l_scale;
  g.s_nodes.resize(n);
  g.x_nodes.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) g.s_nodes[j] = kPi * (2.0 * j + 1.0) / (2.0 * nd);
  // x_{N-1-j} = -x_j exactly; the middle node of an odd grid is x = 0.
  for (std::size_t j = 0; j < n / 2; ++j) {
    g.x_nodes[j] = l_scale / std::tan(g.s_nodes[j]);
    g.x_nodes[n - 1 - j] = -g.x_nodes[j];
  }
  if (n % 2 == 1) g.x_nodes[n / 2] = 0.0;
  return g;
}

std::size_t slot_of(ModeIndex m, std::size_t n) {
  if (m.k < min_mode(n) || m.k > max_mode(n))
    throw DomainError("mode " + std::to_string(m.k) + " outside grid of size " + std::to_string(n));
  return m.k >= 0 ? static_cast<std::size_t>(m.k) : n - static_cast<std::size_t>(-m.k);
}

ModeIndex mode_of(std::size_t slot, std::size_t n) {
  const std::size_t half = (n + 1) / 2;
  return {slot < half ? static_cast<int>(slot) : static_cast<int>(slot) - static_cast<int>(n)};
}

cplx lambda_k(double x, int k, double l_scale) {
  if (k == 0) return 1.0;
  return unit(2.0 * k * arccot(x / l_scale));
}

cplx phi_k(double x, int k) {
  if (k == 0) return 1.0;
  return unit(k * arccot(x));
}

cplx mu_k(double x, int k) { return 0.5 * (lambda_k(x, k) - lambda_k(x, k + 1)); }

CoeffVector analyze(std::span<const cplx> samples, const SpectralGrid& grid, double krasny_eps) {
  if (samples.size() != grid.n)
    throw DomainError("analyze: expected " + std::to_string(grid.n) + " samples, got " +
                      std::to_string(samples.size()));
  CoeffVector c{std::vector<cplx>(grid.n)};
  fft::forward(samples, c.coeffs);
  phase_correct(c.coeffs);
  krasny(c, krasny_eps);
  return c;
}

CoeffVector analyze(std::span<const double> samples, const SpectralGrid& grid, double krasny_eps) {
  std::vector<cplx> z(samples.begin(), samples.end());
  return analyze(std::span<const cplx>(z), grid, krasny_eps);
}

CoeffVector analyze_naive(std::span<const cplx> samples, const SpectralGrid& grid,
                          double krasny_eps) {
  if (samples.size() != grid.n) throw DomainError("analyze_naive: sample count mismatch");
  CoeffVector c{std::vector<cplx>(grid.n)};
  fft::forward_naive(samples, c.coeffs);
  phase_correct(c.coeffs);
  krasny(c, krasny_eps);
  return c;
}

cplx synthesize(const CoeffVector& coeffs, double s) {
  const std::size_t n = coeffs.n();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (coeffs.coeffs[i] == 0.0) continue;
    acc += coeffs.coeffs[i] * unit(2.0 * mode_of(i, n).k * s);
  }
  return acc;
}

std::vector<cplx> synthesize_nodes(const CoeffVector& coeffs) {
  const std::size_t n = coeffs.n();
  std::vector<cplx> shifted(n);
  for (std::size_t i = 0; i < n; ++i)
    shifted[i] = coeffs.coeffs[i] * unit(kPi * mode_of(i, n).k / static_cast<double>(n));
  std::vector<cplx> out(n);
  fft::backward(shifted, out);
  return out;
}

} // namespace rfspec
