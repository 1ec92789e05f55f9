#pragma once

#include <complex>
#include <span>

namespace rfspec::fft {

using cplx = std::complex<double>;

/// out[k] = sum_j in[j] e^{-2πi jk/n}. Unnormalised, any n >= 1. Safe to
/// call concurrently; plans are cached per (n, direction).
void forward(std::span<const cplx> in, std::span<cplx> out);

/// out[j] = sum_k in[k] e^{+2πi jk/n}. Unnormalised.
void backward(std::span<const cplx> in, std::span<cplx> out);

/// O(n^2) reference transforms with the same conventions.
void forward_naive(std::span<const cplx> in, std::span<cplx> out);
void backward_naive(std::span<const cplx> in, std::span<cplx> out);

} // namespace rfspec::fft
