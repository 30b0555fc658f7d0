#pragma once

#include <complex>
#include <span>

namespace burgers_rg::fft {

using cplx = std::complex<double>;

/// Unnormalized DFT, out[k] = sum_j in[j] exp(-2 pi i j k / N).
/// Plans are cached per size; execution is thread-safe.
void forward(std::span<const cplx> in, std::span<cplx> out);

/// Unnormalized inverse DFT, out[j] = sum_k in[k] exp(+2 pi i j k / N).
void backward(std::span<const cplx> in, std::span<cplx> out);

} // namespace burgers_rg::fft
