#include "cli.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "rfspec/errors.hpp"
#include "rfspec/evolve.hpp"
#include "rfspec/operators.hpp"
#include "rfspec/opmatrix.hpp"
#include "rfspec/oracle.hpp"

namespace rfspec::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

const std::map<std::string, OperatorKind>& op_codes() {
  static const std::map<std::string, OperatorKind> m{
      {"dr", OperatorKind::WeylRight},     {"dl", OperatorKind::WeylLeftNeg},
      {"dxr", OperatorKind::DxWeylRight},  {"dxl", OperatorKind::DxWeylLeftNeg},
      {"rf", OperatorKind::RieszFeller},   {"fl", OperatorKind::FracLaplacian},
  };
  return m;
}

int env_jobs() {
  const char* v = std::getenv("RF_SPECTRAL_JOBS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long j = std::strtol(v, &end, 10);
  if (*end != '\0' || j < 0 || j > 4096)
    throw UsageError(std::string("RF_SPECTRAL_JOBS must be a nonnegative integer, got '") + v + "'");
  return static_cast<int>(j);
}

struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::vector<std::string> outputs;
  double wall_time = 0.0;
  json results = json::object();

  void write(const fs::path& dir) const {
    for (const auto& o : outputs)
      if (!fs::exists(o)) throw FormatError("declared output is missing: " + o);
    json j{{"command", command},     {"parameters", parameters}, {"outputs", outputs},
           {"wall_time", wall_time}, {"results", results}};
    const fs::path p = dir / "manifest.json";
    std::ofstream f(p);
    if (!f) throw FormatError("cannot open " + p.string() + " for writing");
    f << j.dump(2) << '\n';
  }
};

struct OpFlags {
  std::string op = "rf";
  double alpha = 1.0;
  double gamma = 0.0;
  std::size_t n = 256;
  double l_scale = 1.0;
  int l_lim = kDefaultLLim;

  void add_to(CLI::App* app, bool with_size = true) {
    app->add_option("--op", op, "operator: dr, dl, dxr, dxl, rf, fl")
        ->check(CLI::IsMember({"dr", "dl", "dxr", "dxl", "rf", "fl"}));
    app->add_option("--alpha", alpha, "order α")->required();
    app->add_option("--gamma", gamma, "skewness γ (rf only)");
    if (with_size) app->add_option("--N", n, "number of nodes");
    app->add_option("--L", l_scale, "map scale L");
    app->add_option("--llim", l_lim, "series truncation l_lim");
  }

  Operator operator_() const {
    const Operator o{op_codes().at(op), alpha, gamma};
    if (o.kind != OperatorKind::RieszFeller && gamma != 0.0)
      throw UsageError("--gamma only applies to --op rf");
    try {
      o.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    if (l_lim < 1) throw UsageError("--llim must be at least 1");
    if (!(l_scale > 0.0)) throw UsageError("--L must be positive");
    return o;
  }

  json to_json() const {
    return {{"op", op}, {"alpha", alpha}, {"gamma", gamma}, {"N", n}, {"L", l_scale}, {"llim", l_lim}};
  }
};

ClosedFormFunction func_from(const std::string& name) {
  try {
    return closed_form_function_from_string(name);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

fs::path prepare_dir(const std::string& out) {
  fs::path p(out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw FormatError("cannot create output directory " + out + ": " + ec.message());
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> parse_l_range(const std::string& spec) {
  std::vector<double> out;
  auto num = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("--L-range: cannot parse '" + s + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    const auto a = spec.find(':'), b = spec.find(':', a + 1);
    if (b == std::string::npos) throw UsageError("--L-range expects start:stop:step");
    const double lo = num(spec.substr(0, a)), hi = num(spec.substr(a + 1, b - a - 1)),
                 h = num(spec.substr(b + 1));
    if (!(h > 0.0) || !(hi >= lo)) throw UsageError("--L-range needs step > 0 and stop >= start");
    const long cnt = std::lround(std::floor((hi - lo) / h + 1e-9));
    if (cnt > 100000) throw UsageError("--L-range has too many points");
    for (long i = 0; i <= cnt; ++i) out.push_back(lo + i * h);
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto c = spec.find(',', start);
      out.push_back(num(spec.substr(start, c == std::string::npos ? std::string::npos : c - start)));
      if (c == std::string::npos) break;
      start = c + 1;
    }
  }
  for (double l : out)
    if (!(l > 0.0)) throw UsageError("--L-range values must be positive");
  return out;
}

void print_summary(const RunManifest& m) {
  std::printf("%s: %s (%.3f s)\n", m.command.c_str(), m.results.dump().c_str(), m.wall_time);
}

// apply

struct ApplyCmd {
  OpFlags f;
  std::string func = "erf";
  std::string out = ".";
  int jobs = 0;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("apply", "apply an operator to a registered function");
    f.add_to(c);
    c->add_option("--func", func, "erf, arctan or log1psq");
    c->add_option("--out", out, "output directory");
    c->add_option("--jobs", jobs, "OpenMP threads (0: all)");
  }

  RunManifest run() const {
    const auto t0 = std::chrono::steady_clock::now();
    const Operator op = f.operator_();
    const ClosedFormFunction fn = func_from(func);
    const fs::path dir = prepare_dir(out);
    const ApplyReport r = apply_closed_form(fn, op, f.n, f.l_scale, f.l_lim, jobs);
    const std::string csv = (dir / "apply.csv").string();
    write_apply_csv(r, csv);
    RunManifest m;
    m.command = "apply";
    m.parameters = f.to_json();
    m.parameters["func"] = func;
    m.parameters["decomposition"] = default_decomposition(fn).description;
    m.outputs = {csv};
    m.results["linf_error"] = *r.linf_error;
    m.wall_time = seconds_since(t0);
    return m;
  }
};

// matrix

struct MatrixCmd {
  OpFlags f;
  std::string save, load, func, out = ".";
  int jobs = 0;
  CLI::App* cmd = nullptr;

  void add(CLI::App& app) {
    CLI::App* c = cmd = app.add_subcommand("matrix", "build and save, or load, an operator matrix");
    f.add_to(c);
    c->get_option("--alpha")->required(false);
    auto* s = c->add_option("--save", save, "write the matrix to this file");
    auto* l = c->add_option("--load", load, "read the matrix from this file");
    s->excludes(l);
    c->add_option("--func", func, "also apply the matrix to this function");
    c->add_option("--out", out, "output directory for apply results");
    c->add_option("--jobs", jobs, "OpenMP threads (0: all)");
  }

  RunManifest run() const {
    const auto t0 = std::chrono::steady_clock::now();
    if (save.empty() == load.empty()) throw UsageError("matrix needs exactly one of --save, --load");
    RunManifest m;
    m.command = "matrix";
    OperatorMatrix mat;
    if (!save.empty()) {
      if (cmd->count("--alpha") == 0) throw UsageError("matrix --save needs --alpha");
      const Operator op = f.operator_();
      BuildOptions opts;
      opts.jobs = jobs;
      mat = scale_to_operator(build_base_matrix(op.alpha, f.n, f.l_lim, opts), op.kind, op.gamma,
                              f.l_scale);
      save_matrix(mat, save);
      m.parameters = f.to_json();
      m.parameters["save"] = save;
      m.outputs.push_back(save);
    } else {
      mat = load_matrix(load);
      m.parameters["load"] = load;
    }
    m.results = {{"kind", to_string(mat.kind)}, {"alpha", mat.alpha}, {"gamma", mat.gamma},
                 {"L", mat.l_scale},            {"llim", mat.l_lim},  {"N", mat.n}};
    if (!func.empty()) {
      const ClosedFormFunction fn = func_from(func);
      const fs::path dir = prepare_dir(out);
      const SpectralGrid g = make_grid(mat.n, mat.l_scale);
      const ApplyReport r =
          apply_with_aux([fn](double x) { return closed_form_value(fn, x); },
                         default_decomposition(fn), mat, g, fn, jobs);
      const std::string csv = (dir / "apply.csv").string();
      write_apply_csv(r, csv);
      m.parameters["func"] = func;
      m.outputs.push_back(csv);
      m.results["linf_error"] = *r.linf_error;
    }
    m.wall_time = seconds_since(t0);
    return m;
  }

  std::string manifest_dir() const { return out; }
};

// sweep

struct SweepCmd {
  OpFlags f;
  std::string func = "erf";
  std::vector<std::size_t> n_list{8, 16, 32, 64, 128, 256, 512, 1024};
  std::string l_range = "0.5:5:0.5";
  std::string out = ".";
  int jobs = 0;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("sweep", "L∞ error over an (L, N) grid");
    f.add_to(c, false);
    c->add_option("--func", func, "erf, arctan or log1psq");
    c->add_option("--N-list", n_list, "comma separated N values")->delimiter(',');
    c->add_option("--L-range", l_range, "start:stop:step or a comma separated list");
    c->add_option("--out", out, "output directory");
    c->add_option("--jobs", jobs, "OpenMP threads (0: all)");
  }

  RunManifest run() const {
    const auto t0 = std::chrono::steady_clock::now();
    const Operator op = f.operator_();
    const ClosedFormFunction fn = func_from(func);
    const std::vector<double> ls = parse_l_range(l_range);
    for (std::size_t n : n_list)
      if (n < 2) throw UsageError("--N-list values must be at least 2");
    const fs::path dir = prepare_dir(out);
    const SweepResult s = sweep_errors(fn, op, n_list, ls, f.l_lim, jobs);
    const std::string csv = (dir / "sweep.csv").string();
    write_sweep_csv(s, csv);
    RunManifest m;
    m.command = "sweep";
    m.parameters = f.to_json();
    m.parameters.erase("N");
    m.parameters["func"] = func;
    m.parameters["N_list"] = n_list;
    m.parameters["L_list"] = ls;
    m.outputs = {csv};
    json best = json::object();
    for (std::size_t jn = 0; jn < n_list.size(); ++jn) {
      std::size_t arg = 0;
      for (std::size_t il = 1; il < ls.size(); ++il)
        if (s.errors[il][jn] < s.errors[arg][jn]) arg = il;
      best[std::to_string(n_list[jn])] = {{"L", ls[arg]}, {"linf_error", s.errors[arg][jn]}};
    }
    m.results["best_per_N"] = best;
    m.wall_time = seconds_since(t0);
    return m;
  }
};

// evolve

struct EvolveCmd {
  double alpha = 1.37;
  std::vector<double> gammas{-0.63};
  std::size_t n = 2048;
  double l_scale = 300.0;
  int l_lim = kDefaultLLim;
  double dt = 0.05;
  double t_end = 12.0;
  std::vector<double> window{8.0, 11.5};
  int stride = 1;
  int csv_stride = 20;
  double budget = 0.0;
  bool full = false;
  std::string out = ".";
  int jobs = 0;
  CLI::App* cmd = nullptr;

  void add(CLI::App& app) {
    cmd = app.add_subcommand("evolve", "fractional Fisher front propagation");
    cmd->add_option("--alpha", alpha, "order α");
    cmd->add_option("--gamma", gammas, "skewness γ; several values run independently")
        ->delimiter(',');
    cmd->add_option("--N", n, "number of nodes");
    cmd->add_option("--L", l_scale, "map scale L");
    cmd->add_option("--llim", l_lim, "series truncation l_lim");
    cmd->add_option("--dt", dt, "RK4 time step");
    cmd->add_option("--t-end", t_end, "final time");
    cmd->add_option("--fit-window", window, "t0,t1 of the exponential fit")
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--stride", stride, "steps between snapshots and front samples");
    cmd->add_option("--csv-stride", csv_stride, "write every n-th snapshot as CSV (the last is always written)");
    cmd->add_option("--budget", budget, "wall-time guard per run in seconds (0: none)");
    cmd->add_flag("--full", full,
                  "full configuration N=16384, L=2100, t in [0,22], fit window [15,21]; "
                  "takes hours and about 4.5 GB of memory");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--jobs", jobs, "OpenMP threads (0: all)");
  }

  RunManifest run() {
    const auto t0 = std::chrono::steady_clock::now();
    if (full) {
      auto unset = [&](const char* name) { return cmd->count(name) == 0; };
      if (unset("--N")) n = 16384;
      if (unset("--L")) l_scale = 2100.0;
      if (unset("--t-end")) t_end = 22.0;
      if (unset("--fit-window")) window = {15.0, 21.0};
      if (unset("--budget")) budget = 6 * 3600.0;
    }
    if (gammas.empty()) throw UsageError("--gamma needs at least one value");
    if (!(window[0] < window[1])) throw UsageError("--fit-window needs t0 < t1");
    if (csv_stride < 1) throw UsageError("--csv-stride must be at least 1");
    if (window[1] > t_end + 1e-12) throw UsageError("--fit-window ends after --t-end");
    std::vector<EvolutionConfig> cfgs;
    for (double g : gammas) {
      EvolutionConfig c;
      c.alpha = alpha;
      c.gamma = g;
      c.n = n;
      c.l_scale = l_scale;
      c.l_lim = l_lim;
      c.dt = dt;
      c.t_end = t_end;
      c.snapshot_stride = stride;
      c.wall_budget = budget;
      try {
        c.validate();
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      cfgs.push_back(c);
    }
    const fs::path dir = prepare_dir(out);

    BuildOptions opts;
    opts.jobs = jobs;
    const bool single = cfgs.size() == 1;
    std::optional<OperatorMatrix> base;
    if (!single) base = build_base_matrix(alpha, n, l_lim, opts);

    const auto runs = static_cast<long>(cfgs.size());
    std::vector<json> results(cfgs.size());
    std::vector<std::vector<std::string>> outputs(cfgs.size());
    std::vector<std::string> errors(cfgs.size());
    std::vector<int> error_kind(cfgs.size(), 0);
    const int threads = single ? 1 : (jobs > 0 ? jobs : omp_get_max_threads());
#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (long i = 0; i < runs; ++i) {
      EvolutionConfig c = cfgs[static_cast<std::size_t>(i)];
      try {
        c.jobs = single ? jobs : 1;
        char sub[64];
        std::snprintf(sub, sizeof sub, "gamma_%+.4f", c.gamma);
        const fs::path rdir = single ? dir : dir / sub;
        fs::create_directories(rdir);
        FisherProblem p =
            single ? FisherProblem::from_config(c)
                   : FisherProblem(scale_to_operator(*base, OperatorKind::RieszFeller, c.gamma, c.l_scale),
                                   make_grid(c.n, c.l_scale),
                                   AuxDecomposition::for_limits(c.u_minus, c.u_plus), 1);
        const EvolutionResult res = rk4_evolve(c, p, initial_state(c, p.grid()));
        const RegressionResult fit = fit_exponential(res.trace, window[0], window[1]);
        auto& outs = outputs[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
          if (k % static_cast<std::size_t>(csv_stride) != 0 && k + 1 != res.snapshots.size()) continue;
          char name[64];
          std::snprintf(name, sizeof name, "snapshot_%05d.csv",
                        static_cast<int>(std::lround(res.snapshots[k].t / c.dt)));
          const std::string path = (rdir / name).string();
          write_snapshot_csv(p.grid(), res.snapshots[k].u, path);
          outs.push_back(path);
        }
        const std::string summary = (rdir / "summary.json").string();
        write_evolution_summary(c, res, fit, window[0], window[1], summary);
        outs.push_back(summary);
        results[static_cast<std::size_t>(i)] = {{"gamma", c.gamma},
                                                {"slope", fit.slope},
                                                {"sigma_minus_inv_alpha", fit.slope - 1.0 / c.alpha},
                                                {"pearson_rho", fit.pearson_rho},
                                                {"samples", fit.samples},
                                                {"steps", res.steps}};
      } catch (const DomainError& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
        error_kind[static_cast<std::size_t>(i)] = 1;
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
        error_kind[static_cast<std::size_t>(i)] = 2;
      }
    }
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
      if (error_kind[i] == 1) throw DomainError(errors[i]);
      if (error_kind[i] == 2) throw NumericError(errors[i]);
    }

    RunManifest m;
    m.command = "evolve";
    m.parameters = {{"alpha", alpha}, {"gamma", gammas},     {"N", n},
                    {"L", l_scale},   {"llim", l_lim},       {"dt", dt},
                    {"t_end", t_end}, {"fit_window", window}, {"stride", stride}, {"csv_stride", csv_stride},
                    {"budget", budget}, {"full", full}};
    for (const auto& o : outputs) m.outputs.insert(m.outputs.end(), o.begin(), o.end());
    m.results["runs"] = results;
    m.wall_time = seconds_since(t0);
    return m;
  }
};

// oracle

struct OracleCmd {
  OpFlags f;
  std::string func = "erf";
  int nodes = 5;
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  std::string rep = "default";
  std::string out = ".";
  int jobs = 0;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("oracle", "spectral vs quadrature vs closed form");
    f.add_to(c);
    c->add_option("--func", func, "erf, arctan or log1psq");
    c->add_option("--nodes", nodes, "number of interior nodes compared");
    c->add_option("--abs-tol", abs_tol, "quadrature absolute tolerance");
    c->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    c->add_option("--rep", rep, "quadrature form: default, derivative, difference")
        ->check(CLI::IsMember({"default", "derivative", "difference"}));
    c->add_option("--out", out, "output directory");
    c->add_option("--jobs", jobs, "OpenMP threads (0: all)");
  }

  RunManifest run() const {
    const auto t0 = std::chrono::steady_clock::now();
    const Operator op = f.operator_();
    const ClosedFormFunction fn = func_from(func);
    if (nodes < 1 || static_cast<std::size_t>(nodes) > f.n)
      throw UsageError("--nodes must be between 1 and N");
    const fs::path dir = prepare_dir(out);
    const ApplyReport r = apply_closed_form(fn, op, f.n, f.l_scale, f.l_lim, jobs);
    const OracleFunction u = oracle_function(fn);
    QuadratureConfig qc;
    qc.abs_tol = abs_tol;
    qc.rel_tol = rel_tol;
    const Representation rp = rep == "derivative"   ? Representation::Derivative
                              : rep == "difference" ? Representation::Difference
                                                    : Representation::Default;
    // nodes spread over the middle half of the grid
    std::vector<std::size_t> idx;
    const std::size_t lo = f.n / 4, span = f.n / 2;
    for (int i = 0; i < nodes; ++i)
      idx.push_back(nodes == 1 ? f.n / 2 : lo + span * static_cast<std::size_t>(i) / (nodes - 1));

    const std::string csv = (dir / "oracle.csv").string();
    std::ofstream o(csv);
    if (!o) throw FormatError("cannot open " + csv + " for writing");
    o << "x,spectral_re,spectral_im,quadrature,quad_error_estimate,closed_form\n";
    double max_diff = 0.0;
    for (std::size_t j : idx) {
      const double x = r.grid.x_nodes[j];
      const QuadResult q = quad_operator(op, u, x, qc, rp);
      const double exact = (*r.exact)[j];
      max_diff = std::max(max_diff, std::abs(r.approx[j] - q.value));
      char buf[200];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x, r.approx[j].real(),
                    r.approx[j].imag(), q.value, q.error_estimate, exact);
      o << buf;
    }
    o.close();
    if (!o) throw FormatError("write failed: " + csv);
    RunManifest m;
    m.command = "oracle";
    m.parameters = f.to_json();
    m.parameters["func"] = func;
    m.parameters["nodes"] = nodes;
    m.parameters["abs_tol"] = abs_tol;
    m.parameters["rel_tol"] = rel_tol;
    m.parameters["rep"] = rep;
    m.outputs = {csv};
    m.results["max_spectral_vs_quadrature"] = max_diff;
    m.results["linf_error_spectral"] = *r.linf_error;
    m.wall_time = seconds_since(t0);
    return m;
  }
};

} // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Spectral fractional operators on the real line"};
  app.require_subcommand(1);
  ApplyCmd apply_cmd;
  MatrixCmd matrix_cmd;
  SweepCmd sweep_cmd;
  EvolveCmd evolve_cmd;
  OracleCmd oracle_cmd;
  try {
    const int j = env_jobs();
    apply_cmd.jobs = matrix_cmd.jobs = sweep_cmd.jobs = evolve_cmd.jobs = oracle_cmd.jobs = j;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  apply_cmd.add(app);
  matrix_cmd.add(app);
  sweep_cmd.add(app);
  evolve_cmd.add(app);
  oracle_cmd.add(app);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    RunManifest m;
    std::string out;
    if (name == "apply") {
      m = apply_cmd.run();
      out = apply_cmd.out;
    } else if (name == "matrix") {
      m = matrix_cmd.run();
      out = matrix_cmd.func.empty() ? std::string() : matrix_cmd.out;
    } else if (name == "sweep") {
      m = sweep_cmd.run();
      out = sweep_cmd.out;
    } else if (name == "evolve") {
      m = evolve_cmd.run();
      out = evolve_cmd.out;
    } else {
      m = oracle_cmd.run();
      out = oracle_cmd.out;
    }
    if (!out.empty()) {
      m.write(out);
      m.outputs.push_back((fs::path(out) / "manifest.json").string());
    }
    print_summary(m);
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

} // namespace rfspec::cli
