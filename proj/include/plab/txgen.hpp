#pragma once

#include "plab/types.hpp"

namespace plab::txgen {

struct BadLength : Error {
  using Error::Error;
};
struct BadSignaling : Error {
  using Error::Error;
};
struct EmptySignal : Error {
  using Error::Error;
};
struct ZeroSignal : Error {
  using Error::Error;
};

inline constexpr int kSignalingModes = 511;  // delta_phi in [0, 510]

// Frequency-domain mapping of the preamble:
//   bins[k]    = d_a[k]                          0 <= k < 511
//   bins[k]    = d_b[(k + delta_phi - 512) % M]  512 <= k < 1023
//   bins[511]  = bins[1023] = -1
SpectrumFrame build_spectrum(const BipolarSequence& d_a, const BipolarSequence& d_b,
                             int delta_phi);

// 2048-sample preamble: unitary 1024-point inverse transform of the
// spectrum, with the second half of the body copied to the front (cyclic
// prefix) and to the end (postfix).
SampleStream assemble_preamble(const SpectrumFrame& spectrum,
                               double sample_interval_us = kDefaultSampleIntervalUs);

// Conventional P1 time structure: parts C/A/B where the guard copies carry
// a frequency shift of 1/(1024 Ts). Body content is caller-supplied.
SampleStream build_p1_baseline(const SampleStream& body);

// 10*log10(peak power / mean power), computed at symbol rate.
double papr_db(const SampleStream& signal);

}  // namespace plab::txgen
