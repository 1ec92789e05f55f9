#include "rfspec/opmatrix.hpp"

#include <omp.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "rfspec/errors.hpp"
#include "rfspec/fft.hpp"

namespace rfspec {

namespace {

cplx unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

int thread_count(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

void check_build_args(double alpha, std::size_t n, int l_lim) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("build_base_matrix: alpha must lie in (0,2)");
  if (n < 2) throw DomainError("build_base_matrix: N must be at least 2");
  if (alpha != 1.0 && l_lim < 1) throw DomainError("build_base_matrix: l_lim must be >= 1");
}

OperatorMatrix empty_base(double alpha, std::size_t n, int l_lim) {
  OperatorMatrix m;
  m.kind = OperatorKind::FracLaplacian;
  m.alpha = alpha;
  m.l_scale = 1.0;
  m.l_lim = l_lim;
  m.n = n;
  m.entries.assign(n * n, cplx{0.0});
  return m;
}

std::vector<double> prefactors(double alpha, const SpectralGrid& g) {
  const double c = c_alpha(alpha) / (2.0 * std::tan(alpha * kPi / 2));
  std::vector<double> p(g.n);
  for (std::size_t j = 0; j < g.n; ++j) p[j] = c * std::pow(std::sin(g.s_nodes[j]), alpha - 1.0);
  return p;
}

void fill_alpha_one(OperatorMatrix& m, const SpectralGrid& g) {
  const std::size_t n = m.n;
  for (int k = 1; k <= max_mode(n); ++k) {
    const std::size_t cp = slot_of({k}, n), cm = slot_of({-k}, n);
    for (std::size_t j = 0; j < n; ++j) {
      const double sn = std::sin(g.s_nodes[j]);
      const cplx v = 2.0 * k * sn * sn * unit(2.0 * k * g.s_nodes[j]);
      m(j, cp) = v;
      m(j, cm) = std::conj(v);
    }
  }
}

// Byte-level little-endian encoding.
template <class T>
void put(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof(T)))
    throw FormatError(std::string("matrix file truncated while reading ") + what);
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

} // namespace

double build_work_units(std::size_t n, int l_lim) {
  const double nd = static_cast<double>(n);
  return nd * nd * (2.0 * l_lim + 1.0);
}

OperatorMatrix build_base_matrix(double alpha, std::size_t n, int l_lim, const BuildOptions& opts) {
  check_build_args(alpha, n, l_lim);
  const double bytes = static_cast<double>(n) * static_cast<double>(n) * sizeof(cplx);
  if (bytes > opts.max_bytes)
    throw BudgetError("build_base_matrix: " + std::to_string(bytes) +
                      " bytes of matrix storage exceed the limit of " + std::to_string(opts.max_bytes));
  if (alpha != 1.0 && build_work_units(n, l_lim) > opts.max_work_units)
    throw BudgetError("build_base_matrix: N*N*(2*l_lim+1) = " +
                      std::to_string(build_work_units(n, l_lim)) + " exceeds the limit of " +
                      std::to_string(opts.max_work_units));

  const SpectralGrid g = make_grid(n, 1.0);
  OperatorMatrix m = empty_base(alpha, n, l_lim);
  if (alpha == 1.0) {
    fill_alpha_one(m, g);
    return m;
  }

  const auto ni = static_cast<long>(n);
  const long lo2 = -static_cast<long>(n / 2);
  const long hi2 = static_cast<long>((n + 1) / 2) - 1;
  const std::size_t p_max = static_cast<std::size_t>(l_lim) * n + n - 1;
  const RatioTable v1 = ratio_table(alpha, RatioKind::V1, p_max);
  const RatioTable v2 = ratio_table(alpha, RatioKind::V2, p_max);
  const std::vector<double> pref = prefactors(alpha, g);
  const std::size_t half_rows = (n + 1) / 2;
  const int kmax = max_mode(n);

#pragma omp parallel num_threads(thread_count(opts.jobs))
  {
    std::vector<cplx> b(n), col(n);
#pragma omp for schedule(dynamic)
    for (int k = 1; k <= kmax; ++k) {
      const double kk = k;
      const double base = (1.0 - alpha) * kk * kk;
      for (long l2 = lo2; l2 <= hi2; ++l2) {
        double acc = 0.0;
        for (long l1 = -l_lim; l1 <= l_lim; ++l1) {
          const long l = l1 * ni + l2;
          const double t = v1[static_cast<std::size_t>(std::labs(l))] * (base - 2.0 * kk * l) *
                           v2[static_cast<std::size_t>(std::labs(k - l))];
          acc += (l1 & 1) ? -t : t;
        }
        const std::size_t slot = static_cast<std::size_t>((l2 + ni) % ni);
        b[slot] = acc * unit(kPi * static_cast<double>(l2) / static_cast<double>(n));
      }
      fft::backward(b, col);
      const std::size_t cp = slot_of({k}, n), cm = slot_of({-k}, n);
      for (std::size_t j = 0; j < half_rows; ++j) {
        const cplx v = pref[j] * col[j];
        m(j, cp) = v;
        m(j, cm) = std::conj(v);
      }
    }
  }

  for (std::size_t j = 0; j < n / 2; ++j)
    for (std::size_t c = 0; c < n; ++c) m(n - 1 - j, c) = std::conj(m(j, c));
  if (n % 2 == 1)
    for (std::size_t c = 0; c < n; ++c) m(n / 2, c) = m(n / 2, c).real();
  return m;
}

OperatorMatrix build_base_matrix_reference(double alpha, std::size_t n, int l_lim) {
  check_build_args(alpha, n, l_lim);
  const SpectralGrid g = make_grid(n, 1.0);
  OperatorMatrix m = empty_base(alpha, n, l_lim);
  if (alpha == 1.0) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < n; ++c) {
        const int k = mode_of(c, n).k;
        if (k == 0 || (n % 2 == 0 && k == min_mode(n))) continue;
        const double sn = std::sin(g.s_nodes[j]);
        m(j, c) = 2.0 * std::abs(k) * sn * sn * unit(2.0 * k * g.s_nodes[j]);
      }
    return m;
  }

  const long ni = static_cast<long>(n);
  const long lo = -static_cast<long>(l_lim) * ni - static_cast<long>(n / 2);
  const long hi = static_cast<long>(l_lim) * ni + static_cast<long>((n + 1) / 2) - 1;
  const std::size_t p_max = static_cast<std::size_t>(l_lim) * n + n - 1;
  const RatioTable v1 = ratio_table(alpha, RatioKind::V1, p_max);
  const RatioTable v2 = ratio_table(alpha, RatioKind::V2, p_max);
  const std::vector<double> pref = prefactors(alpha, g);

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < n; ++c) {
      const int k = mode_of(c, n).k;
      if (k == 0 || (n % 2 == 0 && k == min_mode(n))) continue;
      const double kk = k;
      const long a = k > 0 ? lo : -hi;
      const long b = k > 0 ? hi : -lo;
      cplx acc = 0.0;
      for (long l = a; l <= b; ++l) {
        const double t = v1[static_cast<std::size_t>(std::labs(l))] *
                         ((1.0 - alpha) * kk * kk - 2.0 * kk * l) *
                         v2[static_cast<std::size_t>(std::labs(k - l))];
        // 2 l s_j = π l (2j+1) / N, reduced exactly modulo 2π
        const long r = ((l * (2 * static_cast<long>(j) + 1)) % (2 * ni) + 2 * ni) % (2 * ni);
        acc += t * unit(kPi * static_cast<double>(r) / static_cast<double>(n));
      }
      m(j, c) = pref[j] * acc;
    }
  }
  return m;
}

OperatorMatrix scale_to_operator(OperatorMatrix base, OperatorKind kind, double gamma,
                                 double l_scale) {
  if (!base.is_base())
    throw StateError("scale_to_operator: input is already scaled (kind " + to_string(base.kind) +
                     ", L = " + std::to_string(base.l_scale) + ")");
  if (!(l_scale > 0.0) || !std::isfinite(l_scale))
    throw DomainError("scale_to_operator: L must be positive and finite");
  const Operator op{kind, base.alpha, kind == OperatorKind::RieszFeller ? gamma : 0.0};
  const PhaseRule rule = phase_rule(op);
  base.kind = kind;
  base.gamma = op.gamma;
  base.l_scale = l_scale;
  const double inv = std::pow(l_scale, -base.alpha);
  const std::size_t n = base.n;
  std::vector<cplx> factor(n);
  for (std::size_t c = 0; c < n; ++c) factor[c] = rule.for_mode(mode_of(c, n).k) * inv;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t c = 0; c < n; ++c) base(j, c) *= factor[c];
  return base;
}

std::vector<cplx> apply(const OperatorMatrix& m, const CoeffVector& coeffs, int jobs) {
  if (coeffs.n() != m.n)
    throw DomainError("apply: matrix is " + std::to_string(m.n) + "x" + std::to_string(m.n) +
                      " but coefficient vector has length " + std::to_string(coeffs.n()));
  const std::size_t n = m.n;
  std::vector<cplx> out(n);
  const cplx* u = coeffs.coeffs.data();
#pragma omp parallel for num_threads(thread_count(jobs)) schedule(static) if (n >= 128)
  for (std::size_t j = 0; j < n; ++j) {
    const cplx* row = m.entries.data() + j * n;
    double re = 0.0, im = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      re += row[c].real() * u[c].real() - row[c].imag() * u[c].imag();
      im += row[c].real() * u[c].imag() + row[c].imag() * u[c].real();
    }
    out[j] = {re, im};
  }
  return out;
}

std::vector<cplx> apply_reference(const OperatorMatrix& m, const CoeffVector& coeffs) {
  if (coeffs.n() != m.n) throw DomainError("apply_reference: dimension mismatch");
  const std::size_t n = m.n;
  std::vector<cplx> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double re = 0.0, im = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const cplx a = m(j, c), u = coeffs.coeffs[c];
      re += a.real() * u.real() - a.imag() * u.imag();
      im += a.real() * u.imag() + a.imag() * u.real();
    }
    out[j] = {re, im};
  }
  return out;
}

void serialize(const OperatorMatrix& m, std::ostream& out) {
  if (m.entries.size() != m.n * m.n) throw DomainError("serialize: entry count does not match n");
  out.write("RFM1", 4);
  put<std::uint32_t>(out, kMatrixFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.n));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.kind));
  put<double>(out, m.alpha);
  put<double>(out, m.gamma);
  put<double>(out, m.l_scale);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.l_lim));
  for (const cplx& v : m.entries) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw FormatError("serialize: write failed");
}

OperatorMatrix deserialize(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw FormatError("matrix file truncated while reading magic");
  if (std::memcmp(magic, "RFM1", 4) != 0) throw FormatError("bad magic, expected RFM1");
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kMatrixFormatVersion)
    throw FormatError("unsupported matrix format version " + std::to_string(version));
  OperatorMatrix m;
  m.n = get<std::uint32_t>(in, "n");
  const auto kind = get<std::uint32_t>(in, "kind");
  if (kind > static_cast<std::uint32_t>(OperatorKind::FracLaplacian))
    throw FormatError("unknown operator kind tag " + std::to_string(kind));
  m.kind = static_cast<OperatorKind>(kind);
  m.alpha = get<double>(in, "alpha");
  m.gamma = get<double>(in, "gamma");
  m.l_scale = get<double>(in, "l_scale");
  m.l_lim = static_cast<int>(get<std::uint32_t>(in, "l_lim"));
  if (m.n < 2 || m.n > (1u << 16)) throw FormatError("implausible matrix size " + std::to_string(m.n));
  // Grow row by row so that a truncated file fails before a huge allocation.
  for (std::size_t j = 0; j < m.n; ++j) {
    for (std::size_t c = 0; c < m.n; ++c) {
      const double re = get<double>(in, "entries");
      const double im = get<double>(in, "entries");
      if (!std::isfinite(re) || !std::isfinite(im))
        throw FormatError("non-finite entry at (" + std::to_string(j) + ", " + std::to_string(c) + ")");
      m.entries.emplace_back(re, im);
    }
  }
  return m;
}

void save_matrix(const OperatorMatrix& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  serialize(m, f);
}

OperatorMatrix load_matrix(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path);
  return deserialize(f);
}

} // namespace rfspec
