#include "rfspec/operators.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rfspec/errors.hpp"

namespace rfspec {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FormatError("cannot open " + path + " for writing");
  return f;
}

void check_pair(const OperatorMatrix& m, const SpectralGrid& g) {
  if (m.n != g.n)
    throw DomainError("matrix size " + std::to_string(m.n) + " does not match grid size " +
                      std::to_string(g.n));
  if (m.l_scale != g.l_scale)
    throw DomainError("matrix built for L = " + std::to_string(m.l_scale) + " but grid has L = " +
                      std::to_string(g.l_scale));
}

} // namespace

AuxDecomposition AuxDecomposition::none() { return {}; }

AuxDecomposition AuxDecomposition::for_limits(double u_minus, double u_plus) {
  AuxDecomposition d;
  d.aux = ClosedFormFunction::Arctan;
  d.scale = (u_plus - u_minus) / kPi;
  d.offset = 0.5 * (u_minus + u_plus);
  d.description = g17(d.offset) + " + " + g17(d.scale) + "*arctan(x)";
  return d;
}

double AuxDecomposition::value(double x) const {
  return scale == 0.0 ? offset : offset + scale * closed_form_value(aux, x);
}

double AuxDecomposition::apply(const Operator& op, double x) const {
  return scale == 0.0 ? 0.0 : scale * reference_operator(aux, op, x);
}

void check_decomposition(const std::function<double(double)>& u, const AuxDecomposition& d) {
  const double big = 1e8;
  const double lo = u(-big) - d.value(-big), hi = u(big) - d.value(big);
  if (!(std::abs(lo - hi) <= 1e-6))
    throw DomainError("decomposition '" + d.description + "' leaves unequal limits: w(-1e8) = " +
                      g17(lo) + ", w(1e8) = " + g17(hi));
}

AuxDecomposition default_decomposition(ClosedFormFunction f) {
  if (f == ClosedFormFunction::Log1pSq) return AuxDecomposition::none();
  const auto lim = closed_form_limits(f);
  return AuxDecomposition::for_limits(lim.first, lim.second);
}

std::vector<cplx> apply_periodic(std::span<const cplx> samples, const OperatorMatrix& matrix,
                                 const SpectralGrid& grid, double krasny_eps, int jobs) {
  check_pair(matrix, grid);
  return apply(matrix, analyze(samples, grid, krasny_eps), jobs);
}

std::vector<cplx> apply_periodic(std::span<const double> samples, const OperatorMatrix& matrix,
                                 const SpectralGrid& grid, double krasny_eps, int jobs) {
  check_pair(matrix, grid);
  return apply(matrix, analyze(samples, grid, krasny_eps), jobs);
}

ApplyReport apply_with_aux(const std::function<double(double)>& u, const AuxDecomposition& decomp,
                           const OperatorMatrix& matrix, const SpectralGrid& grid,
                           std::optional<ClosedFormFunction> truth, int jobs) {
  check_pair(matrix, grid);
  const Operator op = matrix.op();
  std::vector<double> w(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) w[j] = u(grid.x_nodes[j]) - decomp.value(grid.x_nodes[j]);
  ApplyReport rep;
  rep.grid = grid;
  rep.approx = apply_periodic(std::span<const double>(w), matrix, grid, kKrasnyEps, jobs);
  for (std::size_t j = 0; j < grid.n; ++j) rep.approx[j] += decomp.apply(op, grid.x_nodes[j]);
  if (truth) {
    std::vector<double> ex(grid.n);
    double err = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
      ex[j] = reference_operator(*truth, op, grid.x_nodes[j]);
      err = std::max(err, std::abs(rep.approx[j] - ex[j]));
    }
    rep.exact = std::move(ex);
    rep.linf_error = err;
  }
  return rep;
}

ApplyReport apply_closed_form(ClosedFormFunction f, const Operator& op, std::size_t n,
                              double l_scale, int l_lim, int jobs) {
  op.validate();
  BuildOptions opts;
  opts.jobs = jobs;
  const OperatorMatrix m =
      scale_to_operator(build_base_matrix(op.alpha, n, l_lim, opts), op.kind, op.gamma, l_scale);
  const SpectralGrid g = make_grid(n, l_scale);
  return apply_with_aux([f](double x) { return closed_form_value(f, x); }, default_decomposition(f),
                        m, g, f, jobs);
}

SweepResult sweep_errors(ClosedFormFunction f, const Operator& op,
                         const std::vector<std::size_t>& n_list, const std::vector<double>& l_list,
                         int l_lim, int jobs) {
  op.validate();
  SweepResult res{n_list, l_list, std::vector<std::vector<double>>(l_list.size(),
                                                                  std::vector<double>(n_list.size()))};
  const AuxDecomposition decomp = default_decomposition(f);
  auto u = [f](double x) { return closed_form_value(f, x); };
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  for (std::size_t jn = 0; jn < n_list.size(); ++jn) {
    BuildOptions opts;
    opts.jobs = jobs;
    const OperatorMatrix base = build_base_matrix(op.alpha, n_list[jn], l_lim, opts);
    const auto cells = static_cast<long>(l_list.size());
#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (long il = 0; il < cells; ++il) {
      const double L = l_list[static_cast<std::size_t>(il)];
      const OperatorMatrix m = scale_to_operator(base, op.kind, op.gamma, L);
      const ApplyReport r = apply_with_aux(u, decomp, m, make_grid(n_list[jn], L), f, 1);
      res.errors[static_cast<std::size_t>(il)][jn] = *r.linf_error;
    }
  }
  return res;
}

void write_apply_csv(const ApplyReport& report, const std::string& path) {
  std::ofstream f = open_out(path);
  f << "x,approx_re,approx_im,exact_re,exact_im,abs_err\n";
  for (std::size_t j = 0; j < report.grid.n; ++j) {
    const cplx a = report.approx[j];
    f << g17(report.grid.x_nodes[j]) << ',' << g17(a.real()) << ',' << g17(a.imag()) << ',';
    if (report.exact) {
      const double e = (*report.exact)[j];
      f << g17(e) << ',' << g17(0.0) << ',' << g17(std::abs(a - e));
    } else {
      f << ",,";
    }
    f << '\n';
  }
  if (!f) throw FormatError("write failed: " + path);
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
  std::ofstream f = open_out(path);
  f << "L";
  for (std::size_t n : sweep.n_list) f << ",N=" << n;
  f << '\n';
  for (std::size_t i = 0; i < sweep.l_list.size(); ++i) {
    f << g17(sweep.l_list[i]);
    for (double e : sweep.errors[i]) f << ',' << g17(e);
    f << '\n';
  }
  if (!f) throw FormatError("write failed: " + path);
}

} // namespace rfspec
