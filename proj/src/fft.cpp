#include "rfspec/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "rfspec/errors.hpp"
#include "rfspec/specfun.hpp"

namespace rfspec::fft {

namespace {

// The FFTW planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created under a lock and never destroyed.
fftw_plan get_plan(int n, int sign, bool in_place) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, bool>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, sign, in_place);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  fftw_complex* a = fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_complex* b = in_place ? a : fftw_alloc_complex(static_cast<std::size_t>(n));
  fftw_plan p = fftw_plan_dft_1d(n, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (b != a) fftw_free(b);
  fftw_free(a);
  if (p == nullptr) throw NumericError("fftw: plan creation failed");
  plans.emplace(key, p);
  return p;
}

void run(std::span<const cplx> in, std::span<cplx> out, int sign) {
  if (in.size() != out.size()) throw DomainError("fft: size mismatch");
  if (in.empty()) return;
  const bool in_place = in.data() == out.data();
  fftw_plan p = get_plan(static_cast<int>(in.size()), sign, in_place);
  // Out-of-place complex plans preserve their input; the cast only satisfies
  // FFTW's non-const signature.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p, src, dst);
}

void naive(std::span<const cplx> in_, std::span<cplx> out, double sign) {
  if (in_.size() != out.size()) throw DomainError("fft: size mismatch");
  const std::vector<cplx> in(in_.begin(), in_.end());
  const std::size_t n = in.size();
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // reduce jk mod n before forming the angle to keep it small
      const double ang = sign * 2.0 * kPi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += in[j] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
}

} // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_FORWARD); }
void backward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_BACKWARD); }
void forward_naive(std::span<const cplx> in, std::span<cplx> out) { naive(in, out, -1.0); }
void backward_naive(std::span<const cplx> in, std::span<cplx> out) { naive(in, out, 1.0); }

} // namespace rfspec::fft
