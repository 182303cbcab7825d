#include "plab/txgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plab/fft.hpp"

namespace plab::txgen {

SpectrumFrame build_spectrum(const BipolarSequence& d_a, const BipolarSequence& d_b,
                             int delta_phi) {
  if (d_a.length() != kSeqLen || d_b.length() != kSeqLen) {
    throw BadLength("build_spectrum: sequences must have 511 chips");
  }
  if (delta_phi < 0 || delta_phi > 510) {
    throw BadSignaling("build_spectrum: delta_phi outside [0, 510]");
  }
  SpectrumFrame f;
  f.bins.resize(kFftSize);
  for (std::size_t k = 0; k < kSeqLen; ++k) {
    f.bins[k] = static_cast<double>(d_a.chips[k]);
  }
  f.bins[511] = -1.0;
  for (std::size_t k = 512; k < 1023; ++k) {
    f.bins[k] = static_cast<double>(d_b.chips[(k + delta_phi - 512) % kSeqLen]);
  }
  f.bins[1023] = -1.0;
  return f;
}

SampleStream assemble_preamble(const SpectrumFrame& spectrum, double sample_interval_us) {
  if (spectrum.size() != kFftSize) {
    throw BadLength("assemble_preamble: spectrum must have 1024 bins");
  }
  const cvec body = fft::inverse_unitary(spectrum.bins);

  SampleStream out;
  out.sample_interval_us = sample_interval_us;
  out.samples.resize(2 * kFftSize);
  // postfix half of the body serves as both prefix and postfix
  std::copy(body.begin() + 512, body.end(), out.samples.begin());
  std::copy(body.begin(), body.end(), out.samples.begin() + 512);
  std::copy(body.begin() + 512, body.end(), out.samples.begin() + 1536);
  return out;
}

SampleStream build_p1_baseline(const SampleStream& body) {
  if (body.size() != kFftSize) {
    throw BadLength("build_p1_baseline: body must have 1024 samples");
  }
  // f_SH * Ts = 1/1024, so the guard phase advances by 2*pi*n/1024.
  SampleStream out;
  out.sample_interval_us = body.sample_interval_us;
  out.samples.resize(2048);
  const double w = 2.0 * std::numbers::pi / 1024.0;
  for (std::size_t n = 0; n < 542; ++n) {
    out.samples[n] = body.samples[n] * std::polar(1.0, w * static_cast<double>(n));
  }
  for (std::size_t n = 542; n < 1566; ++n) {
    out.samples[n] = body.samples[n - 542];
  }
  for (std::size_t n = 1566; n < 2048; ++n) {
    out.samples[n] = body.samples[n - 1024] * std::polar(1.0, w * static_cast<double>(n));
  }
  return out;
}

double papr_db(const SampleStream& signal) {
  if (signal.size() == 0) throw EmptySignal("papr_db: empty signal");
  double peak = 0.0;
  double sum = 0.0;
  for (const auto& s : signal.samples) {
    const double p = std::norm(s);
    peak = std::max(peak, p);
    sum += p;
  }
  if (peak == 0.0) throw ZeroSignal("papr_db: all-zero signal");
  const double mean = sum / static_cast<double>(signal.size());
  return 10.0 * std::log10(peak / mean);
}

}  // namespace plab::txgen
