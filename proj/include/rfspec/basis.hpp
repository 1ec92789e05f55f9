#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rfspec/specfun.hpp"

namespace rfspec {

/// Collocation grid of the cot map x = L cot(s):
/// s_j = π(2j+1)/(2N), j = 0..N-1, x_j strictly decreasing.
struct SpectralGrid {
  std::size_t n = 0;
  double l_scale = 1.0;
  std::vector<double> s_nodes;
  std::vector<double> x_nodes;
};

SpectralGrid make_grid(std::size_t n, double l_scale);

/// Mode number k of a signed Fourier index, k in [-floor(N/2), ceil(N/2)-1].
struct ModeIndex {
  int k;
};

inline int min_mode(std::size_t n) { return -static_cast<int>(n / 2); }
inline int max_mode(std::size_t n) { return static_cast<int>((n + 1) / 2) - 1; }

/// Storage slot of mode k in DFT ordering: 0..ceil(N/2)-1, then -floor(N/2)..-1.
std::size_t slot_of(ModeIndex m, std::size_t n);
ModeIndex mode_of(std::size_t slot, std::size_t n);

/// Pseudospectral coefficients in DFT ordering.
struct CoeffVector {
  std::vector<cplx> coeffs;

  std::size_t n() const { return coeffs.size(); }
  cplx at(ModeIndex m) const { return coeffs[slot_of(m, n())]; }
  cplx& at(ModeIndex m) { return coeffs[slot_of(m, n())]; }
};

inline constexpr double kKrasnyEps = 0x1p-52;

/// arccot with values in (0, π).
inline double arccot(double x) { return kPi / 2 - std::atan(x); }

/// Higgins function ((ix - L)/(ix + L))^k, evaluated in polar form as
/// e^{2ik arccot(x/L)}.
cplx lambda_k(double x, int k, double l_scale = 1.0);

/// (x + i)^k / (1 + x^2)^{k/2} = e^{ik arccot(x)}, any integer k.
cplx phi_k(double x, int k);

/// Christov function (ix - 1)^k/(ix + 1)^{k+1} = (λ_k - λ_{k+1})/2.
cplx mu_k(double x, int k);

/// Pseudospectral coefficients of nodal samples U(s_j):
/// û_k = e^{-iπk/N}/N Σ_j U(s_j) e^{-2πijk/N}, then coefficients with
/// |û_k| <= krasny_eps are zeroed.
CoeffVector analyze(std::span<const cplx> samples, const SpectralGrid& grid,
                    double krasny_eps = kKrasnyEps);
CoeffVector analyze(std::span<const double> samples, const SpectralGrid& grid,
                    double krasny_eps = kKrasnyEps);

/// O(N^2) version of analyze used as a test reference.
CoeffVector analyze_naive(std::span<const cplx> samples, const SpectralGrid& grid,
                          double krasny_eps = kKrasnyEps);

/// Σ_k û_k e^{2iks} at an arbitrary s, summed in storage order.
cplx synthesize(const CoeffVector& coeffs, double s);

/// Values at all grid nodes through the inverse FFT.
std::vector<cplx> synthesize_nodes(const CoeffVector& coeffs);

} // namespace rfspec
