#include "plab/seq.hpp"

#include <numeric>

namespace plab::seq {

BipolarSequence gen_mseq(const LfsrSpec& spec) {
  if (spec.degree < 2) throw Error("gen_mseq: degree must be >= 2");
  const std::uint32_t mask = (1u << spec.degree) - 1;
  if ((spec.initial_state & mask) == 0) {
    throw ZeroState("gen_mseq: initial LFSR state is all zeros");
  }
  for (int t : spec.feedback_taps) {
    if (t < 1 || t > spec.degree) throw Error("gen_mseq: tap out of range");
  }

  const std::size_t period = (std::size_t{1} << spec.degree) - 1;
  std::uint32_t state = spec.initial_state & mask;
  const std::uint32_t start = state;

  BipolarSequence out;
  out.chips.resize(period);
  for (std::size_t i = 0; i < period; ++i) {
    // Output the oldest bit (position `degree`), feed back the tap XOR.
    const int bit = (state >> (spec.degree - 1)) & 1;
    out.chips[i] = bit ? -1 : 1;
    std::uint32_t fb = 0;
    for (int t : spec.feedback_taps) fb ^= (state >> (t - 1)) & 1;
    state = ((state << 1) | fb) & mask;
    if (state == start && i + 1 < period) {
      throw NonPrimitivePolynomial("gen_mseq: period " + std::to_string(i + 1) +
                                   " < " + std::to_string(period));
    }
  }
  if (state != start) {
    throw NonPrimitivePolynomial("gen_mseq: state did not return to start");
  }
  return out;
}

BipolarSequence decimate(const BipolarSequence& s, int step) {
  const std::size_t m = s.length();
  if (m == 0) throw Error("decimate: empty sequence");
  const std::size_t st = static_cast<std::size_t>(step % static_cast<int>(m) + static_cast<int>(m)) % m;
  if (std::gcd(st, m) != 1) {
    throw NonCoprimeStep("decimate: gcd(step, length) != 1");
  }
  BipolarSequence out;
  out.chips.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    out.chips[k] = s.chips[(k * st) % m];
  }
  return out;
}

BipolarSequence integrate_differential(const BipolarSequence& d, int init) {
  const std::size_t m = d.length();
  if (m == 0) throw Error("integrate_differential: empty sequence");
  int prod = 1;
  for (auto c : d.chips) prod *= c;
  if (prod != 1) {
    throw NotClosable("integrate_differential: chip product is -1");
  }
  BipolarSequence a;
  a.chips.resize(m);
  a.chips[0] = static_cast<std::int8_t>(init);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    a.chips[k + 1] = static_cast<std::int8_t>(a.chips[k] * d.chips[k]);
  }
  return a;
}

BipolarSequence differential_of(const BipolarSequence& a) {
  const std::size_t m = a.length();
  BipolarSequence out;
  out.chips.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    out.chips[k] = static_cast<std::int8_t>(a.chips[k] * a.chips[(k + 1) % m]);
  }
  return out;
}

CarrierSet default_carrier_set() {
  CarrierSet cs;
  cs.d_c = gen_mseq(LfsrSpec{});
  cs.d_d = decimate(cs.d_c, 3);
  cs.d_a = integrate_differential(cs.d_c, +1);
  cs.d_b = integrate_differential(cs.d_d, +1);
  return cs;
}

}  // namespace plab::seq
