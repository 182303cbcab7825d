#pragma once

#include <cstddef>
#include <vector>

#include "plab/types.hpp"

namespace plab::est {

struct ZeroPilot : Error {
  using Error::Error;
};
struct NoPaths : Error {
  using Error::Error;
};
struct BadLength : Error {
  using Error::Error;
};

// Time-domain channel estimate; 1024 taps, anchored at window_start.
struct CirEstimate {
  cvec taps;
  std::size_t window_start = 0;
};

// Tap indices whose magnitude clears the power threshold.
struct PathSet {
  std::vector<std::size_t> indices;
  std::size_t d_first = 0;
  std::size_t d_last = 0;
};

// Per-bin least squares: H_k = received_k / transmitted_k. The proposed
// preamble has unit-magnitude pilots on every bin, so the division is
// always well conditioned.
SpectrumFrame ls_estimate(const SpectrumFrame& received, const SpectrumFrame& transmitted);

// Unitary inverse transform of the frequency response. Note the scaling:
// a channel with (non-normalized) response H_k = 1 on every bin comes out
// as a single tap of height sqrt(N) = 32.
CirEstimate to_cir(const SpectrumFrame& h_freq, std::size_t window_start = 0);

// D = {n : |h_n| >= p_th}. Throws NoPaths when empty.
PathSet detect_paths(const CirEstimate& cir, double p_th);

// Convenience for the usual relative threshold (default -20 dB from the
// strongest tap).
double relative_threshold(const CirEstimate& cir, double fraction = 0.1);

// Window offset from the estimated CIR support. A spread larger than N/2
// means the window leads and the early taps wrapped to the tail:
//   delta = -(N - d_last + a)        if d_last - d_first > N/2
//   delta = d_first - a              otherwise
// Positive delta means the window should move later. The guard a biases the
// corrected window a samples ahead of the first path.
int timing_offset(const PathSet& paths, int a, std::size_t n = kFftSize);

}  // namespace plab::est
