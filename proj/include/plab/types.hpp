#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace plab {

// Transform size N and sequence length M used throughout the signal chain.
inline constexpr std::size_t kFftSize = 1024;
inline constexpr std::size_t kSeqLen = 511;

// DVB-T2 8 MHz elementary period, microseconds.
inline constexpr double kDefaultSampleIntervalUs = 7.0 / 64.0;

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// +/-1 chip sequence. Chips are stored as int8_t, always exactly +1 or -1.
struct BipolarSequence {
  std::vector<std::int8_t> chips;

  std::size_t length() const { return chips.size(); }
  int operator[](std::size_t i) const { return chips[i]; }
};

// Complex baseband time series.
struct SampleStream {
  cvec samples;
  double sample_interval_us = kDefaultSampleIntervalUs;

  std::size_t size() const { return samples.size(); }
};

// One frame of 1024 frequency-domain values (bin k = discrete frequency k).
struct SpectrumFrame {
  cvec bins;

  std::size_t size() const { return bins.size(); }
};

// Normalized CFO: total offset in subcarrier units is m_int + f_frac.
struct CfoSpec {
  int m_int = 0;
  double f_frac = 0.0;

  double total() const { return static_cast<double>(m_int) + f_frac; }
};

}  // namespace plab
