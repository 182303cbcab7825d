#pragma once

#include <span>

#include "plab/types.hpp"

namespace plab::fft {

// Unitary DFT pair: both directions carry a 1/sqrt(N) factor, so
// forward(inverse(x)) == x and Parseval holds without extra scaling.
// Backed by FFTW with per-size cached plans; safe to call from
// multiple threads.
void forward_unitary(std::span<const cplx> in, std::span<cplx> out);
void inverse_unitary(std::span<const cplx> in, std::span<cplx> out);

cvec forward_unitary(const cvec& in);
cvec inverse_unitary(const cvec& in);

}  // namespace plab::fft
