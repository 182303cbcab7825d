#pragma once

#include <cstdint>
#include <vector>

#include "plab/types.hpp"

namespace plab::seq {

struct NonPrimitivePolynomial : Error {
  using Error::Error;
};
struct ZeroState : Error {
  using Error::Error;
};
struct NonCoprimeStep : Error {
  using Error::Error;
};
struct NotClosable : Error {
  using Error::Error;
};

// Fibonacci LFSR description. feedback_taps are 1-indexed positions of the
// feedback polynomial, e.g. {9, 4} for x^9 + x^4 + 1.
struct LfsrSpec {
  int degree = 9;
  std::vector<int> feedback_taps = {9, 4};
  std::uint32_t initial_state = 0x1FF;  // all ones
};

// Maximal-length sequence from the LFSR, bits mapped 1 -> -1, 0 -> +1.
// Throws ZeroState for an all-zero state and NonPrimitivePolynomial when
// the observed period falls short of 2^degree - 1.
BipolarSequence gen_mseq(const LfsrSpec& spec);

// out[k] = in[(k * step) mod length]; step must be coprime with length.
// Decimation by 3 turns a degree-9 m-sequence into its preferred-pair
// partner (three-valued cross-correlation {-1, -33, +31}).
BipolarSequence decimate(const BipolarSequence& s, int step);

// Inverse of differential_of: builds a with a[0] = init and
// a[k+1] = a[k] * d[k]. Requires the chip product of d to be +1, otherwise
// no circularly consistent sequence exists (NotClosable).
BipolarSequence integrate_differential(const BipolarSequence& d, int init);

// out[k] = a[k] * a[(k+1) mod M].
BipolarSequence differential_of(const BipolarSequence& a);

// The four sequences of the preamble: carrier sequences d_a / d_b whose
// adjacent products are the preferred m-sequence pair d_c / d_d.
struct CarrierSet {
  BipolarSequence d_a;
  BipolarSequence d_b;
  BipolarSequence d_c;
  BipolarSequence d_d;
};

// Default construction: degree 9, taps {9,4}, all-ones state, partner by
// decimation step 3, integration init +1.
CarrierSet default_carrier_set();

}  // namespace plab::seq
