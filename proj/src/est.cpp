#include "plab/est.hpp"

#include <algorithm>
#include <cmath>

#include "plab/fft.hpp"

namespace plab::est {

SpectrumFrame ls_estimate(const SpectrumFrame& received, const SpectrumFrame& transmitted) {
  if (received.size() != kFftSize || transmitted.size() != kFftSize) {
    throw BadLength("ls_estimate: need 1024 bins");
  }
  SpectrumFrame h;
  h.bins.resize(kFftSize);
  for (std::size_t k = 0; k < kFftSize; ++k) {
    if (std::norm(transmitted.bins[k]) < 1e-24) {
      throw ZeroPilot("ls_estimate: zero pilot at bin " + std::to_string(k));
    }
    h.bins[k] = received.bins[k] / transmitted.bins[k];
  }
  return h;
}

CirEstimate to_cir(const SpectrumFrame& h_freq, std::size_t window_start) {
  if (h_freq.size() != kFftSize) throw BadLength("to_cir: need 1024 bins");
  CirEstimate cir;
  cir.taps = fft::inverse_unitary(h_freq.bins);
  cir.window_start = window_start;
  return cir;
}

PathSet detect_paths(const CirEstimate& cir, double p_th) {
  if (!(p_th > 0.0)) throw Error("detect_paths: threshold must be positive");
  PathSet ps;
  for (std::size_t n = 0; n < cir.taps.size(); ++n) {
    if (std::abs(cir.taps[n]) >= p_th) ps.indices.push_back(n);
  }
  if (ps.indices.empty()) {
    throw NoPaths("detect_paths: no taps reach the threshold");
  }
  ps.d_first = ps.indices.front();
  ps.d_last = ps.indices.back();
  return ps;
}

double relative_threshold(const CirEstimate& cir, double fraction) {
  double peak = 0.0;
  for (const auto& t : cir.taps) peak = std::max(peak, std::abs(t));
  return fraction * peak;
}

int timing_offset(const PathSet& paths, int a, std::size_t n) {
  const auto first = static_cast<int>(paths.d_first);
  const auto last = static_cast<int>(paths.d_last);
  const auto ni = static_cast<int>(n);
  if (last - first > ni / 2) {
    return -(ni - last + a);
  }
  return first - a;
}

}  // namespace plab::est
