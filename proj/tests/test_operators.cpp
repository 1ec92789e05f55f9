#include "test_support.hpp"

#include <filesystem>
#include <fstream>
#include <string>

#include "rfspec/errors.hpp"
#include "rfspec/operators.hpp"

namespace rfspec::test {
#include "frozen/operator_values.inc"
} // namespace rfspec::test

using namespace rfspec;
using namespace rfspec::test;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream f(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(f, line);) out.push_back(line);
  return out;
}

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rfspec_test_operators";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

} // namespace

TEST_CASE("arctan decomposition from limits") {
  const AuxDecomposition d = AuxDecomposition::for_limits(1.0, 0.0);
  for (double x : {-1e6, -2.0, 0.0, 0.5, 1e9}) CHECK(d.value(x) == doctest::Approx(0.5 - std::atan(x) / kPi).epsilon(1e-15));
  const Operator op{OperatorKind::RieszFeller, 1.37, -0.63};
  CHECK(d.apply(op, 0.7) == doctest::Approx(-reference_operator(ClosedFormFunction::Arctan, op, 0.7) / kPi));
  const AuxDecomposition flat = AuxDecomposition::for_limits(1.0, 1.0);
  CHECK(flat.value(3.0) == 1.0);
  CHECK(flat.apply(op, 3.0) == 0.0);
  CHECK(AuxDecomposition::none().value(2.0) == 0.0);
}

TEST_CASE("decomposition check") {
  auto erf = [](double x) { return std::erf(x); };
  CHECK_NOTHROW(check_decomposition(erf, default_decomposition(ClosedFormFunction::Erf)));
  CHECK_THROWS_AS(check_decomposition(erf, AuxDecomposition::none()), DomainError);
  CHECK_NOTHROW(check_decomposition([](double x) { return std::log1p(x * x); }, AuxDecomposition::none()));
}

TEST_CASE("erf and arctan batteries at moderate N") {
  const std::vector<Operator> ops{{OperatorKind::WeylRight, 0.62, 0.0},     {OperatorKind::WeylLeftNeg, 0.62, 0.0},
                                  {OperatorKind::DxWeylRight, 1.37, 0.0},   {OperatorKind::DxWeylLeftNeg, 1.37, 0.0},
                                  {OperatorKind::RieszFeller, 0.62, 0.49},  {OperatorKind::RieszFeller, 1.37, -0.63},
                                  {OperatorKind::FracLaplacian, 1.12, 0.0}, {OperatorKind::RieszFeller, 1.0, 0.3}};
  for (const Operator& op : ops) {
    CAPTURE(to_string(op.kind));
    CAPTURE(op.alpha);
    CHECK(*apply_closed_form(ClosedFormFunction::Erf, op, 128, 2.0).linf_error < 1e-12);
    CHECK(*apply_closed_form(ClosedFormFunction::Arctan, op, 16, 1.0).linf_error < 1e-13);
  }
}

TEST_CASE("spectral values at x = 0 against the Fourier oracle") {
  const SpectralGrid g = make_grid(129, 2.0);
  REQUIRE(g.x_nodes[64] == 0.0);
  int compared = 0;
  for (const auto& c : kOperatorValues) {
    if (c.x != 0.0 || c.f != ClosedFormFunction::Erf) continue;
    const Operator op{c.kind, c.alpha, c.gamma};
    const ApplyReport r = apply_closed_form(c.f, op, 129, 2.0);
    CAPTURE(to_string(c.kind));
    CHECK(std::abs(r.approx[64] - c.value) < 1e-12);
    CHECK(std::abs(r.approx[64].imag()) < 1e-13);
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("logarithmic growth without decomposition") {
  const ApplyReport r = apply_closed_form(ClosedFormFunction::Log1pSq, {OperatorKind::FracLaplacian, 1.12, 0.0}, 256, 30.0);
  CHECK(*r.linf_error < 1.2e-3);
  CHECK(*r.linf_error > 1e-6);
}

TEST_CASE("dimension checks") {
  const OperatorMatrix m = build_base_matrix(0.5, 8);
  std::vector<double> v(8, 0.0);
  CHECK_THROWS_AS(apply_periodic(std::span<const double>(v), m, make_grid(9, 1.0)), DomainError);
  CHECK_THROWS_AS(apply_periodic(std::span<const double>(v), m, make_grid(8, 2.0)), DomainError);
  CHECK_NOTHROW(apply_periodic(std::span<const double>(v), m, make_grid(8, 1.0)));
}

TEST_CASE("sweep matches single applications") {
  const Operator op{OperatorKind::RieszFeller, 1.37, 0.58};
  const SweepResult s = sweep_errors(ClosedFormFunction::Erf, op, {16, 32}, {1.0, 2.5});
  REQUIRE(s.errors.size() == 2);
  REQUIRE(s.errors[0].size() == 2);
  CHECK(s.errors[1][0] == *apply_closed_form(ClosedFormFunction::Erf, op, 16, 2.5).linf_error);
  CHECK(s.errors[0][1] == *apply_closed_form(ClosedFormFunction::Erf, op, 32, 1.0).linf_error);
  const SweepResult serial = sweep_errors(ClosedFormFunction::Erf, op, {16, 32}, {1.0, 2.5}, kDefaultLLim, 1);
  CHECK(serial.errors == s.errors);
}

TEST_CASE("CSV writers") {
  const ApplyReport r = apply_closed_form(ClosedFormFunction::Erf, {OperatorKind::FracLaplacian, 0.62, 0.0}, 16, 1.1);
  const std::string p = temp_path("apply.csv");
  write_apply_csv(r, p);
  const auto lines = read_lines(p);
  REQUIRE(lines.size() == 17);
  CHECK(lines[0] == "x,approx_re,approx_im,exact_re,exact_im,abs_err");

  const SweepResult s{{8, 16}, {0.5, 1.0}, {{0.1, 0.2}, {0.3, 0.4}}};
  const std::string q = temp_path("sweep.csv");
  write_sweep_csv(s, q);
  const auto sl = read_lines(q);
  REQUIRE(sl.size() == 3);
  CHECK(sl[0] == "L,N=8,N=16");
  CHECK(sl[1] == "0.5,0.10000000000000001,0.20000000000000001");
  CHECK_THROWS_AS(write_sweep_csv(s, "/nonexistent/dir/s.csv"), FormatError);
}
