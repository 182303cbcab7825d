#pragma once

// Shared test oracles. These stay deliberately naive (O(N^2) loops, direct
// formula transcriptions) and independent of the library's transform-domain
// implementations.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "plab/types.hpp"

namespace testhelp {

using plab::cplx;
using plab::cvec;

// Direct O(N^2) DFT, unitary normalization.
inline cvec naive_dft(const cvec& x, bool forward) {
  const std::size_t n = x.size();
  cvec out(n, cplx{0.0, 0.0});
  const double sign = forward ? -1.0 : 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(i) / static_cast<double>(n);
      acc += x[i] * std::polar(1.0, ang);
    }
    out[k] = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

// Brute-force circular correlation: out[q] = sum_k conj(b[k]) a[(k+q) mod M].
inline cvec brute_circ_corr(const cvec& a, const cvec& b) {
  const std::size_t m = a.size();
  cvec out(m, cplx{0.0, 0.0});
  for (std::size_t q = 0; q < m; ++q) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < m; ++k) {
      acc += std::conj(b[k]) * a[(k + q) % m];
    }
    out[q] = acc;
  }
  return out;
}

// Integer circular auto/cross correlation of bipolar chips:
// out[l] = sum_k a[k] * b[(k+l) mod M].
inline std::vector<long> brute_bipolar_corr(const plab::BipolarSequence& a,
                                            const plab::BipolarSequence& b) {
  const std::size_t m = a.length();
  std::vector<long> out(m, 0);
  for (std::size_t l = 0; l < m; ++l) {
    long acc = 0;
    for (std::size_t k = 0; k < m; ++k) {
      acc += static_cast<long>(a.chips[k]) * static_cast<long>(b.chips[(k + l) % m]);
    }
    out[l] = acc;
  }
  return out;
}

inline double max_abs_diff(const cvec& a, const cvec& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace testhelp
