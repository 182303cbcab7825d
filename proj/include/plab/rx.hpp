#pragma once

#include <cstddef>
#include <utility>

#include "plab/seq.hpp"
#include "plab/types.hpp"

namespace plab::rx {

struct NoPeak : Error {
  using Error::Error;
};
struct OutOfBounds : Error {
  using Error::Error;
};
struct BadLength : Error {
  using Error::Error;
};

// Result of the sliding autocorrelation search.
struct CoarseSync {
  std::size_t start_index = 0;  // estimated first sample of the preamble
  double ffo_hat = 0.0;         // fractional CFO, subcarrier units, (-0.5, 0.5]
  double metric_peak = 0.0;     // normalized correlation at the peak, [0, 1]
};

struct CorrelationProfile {
  cvec values;
  std::size_t peak_index = 0;
  double peak_ratio = 0.0;  // |peak| / |second peak|
  bool ambiguous = false;   // peak_ratio below the configured margin
};

struct DetectorConfig {
  double threshold = 0.5;        // NoPeak below this metric
  double ambiguity_margin = 1.1; // CorrelationProfile::ambiguous below this ratio
};

struct DetectionReport {
  CoarseSync coarse;
  int m_int_hat = 0;        // integer CFO estimate, [-512, 511]
  int delta_phi_hat = 0;    // signaling estimate, [0, 510]
  CorrelationProfile ifo_profile;
  CorrelationProfile sig_profile;
};

// Coarse timing + FFO from the preamble repetition structure: lag-1024
// correlation (prefix vs. the matching body half) combined with the
// lag-512 postfix correlation, both over 512-sample windows. The FFO
// estimate is the lag-1024 correlation phase over 2*pi.
CoarseSync coarse_detect(const SampleStream& stream, const DetectorConfig& cfg = {});

// Extracts the 1024-sample OFDM body at start_index + 512, derotates the
// estimated FFO (phase reference at the body start) and applies the unitary
// forward transform.
SpectrumFrame extract_and_transform(const SampleStream& stream, const CoarseSync& sync);

// Y_k = X_k * conj(X_{(k+1) mod N}).
cvec diff_demod(const SpectrumFrame& spectrum);

// Integer CFO search: the differential output is circularly correlated
// against the local sequence d_c over all 1024 lags, each lag normalized by
// the received power inside its 511-bin window. Peak index p folds to
// m_int = p for p < 512, p - 1024 otherwise.
std::pair<int, CorrelationProfile> estimate_ifo(const cvec& y, const SpectrumFrame& spectrum,
                                                const BipolarSequence& d_c,
                                                double ambiguity_margin = 1.1);

// Undo an integer CFO: bins circularly shifted so bin k picks up
// bin (k + m_int_hat) mod N of the input.
SpectrumFrame correct_ifo(const SpectrumFrame& spectrum, int m_int_hat);

// Signaling decode on the IFO-corrected spectrum: bins 512..1022 are
// extracted, differentially demodulated circularly within the block, and
// correlated against d_d over all 511 shifts. The shift convention is
// chosen so that the argmax equals the transmitted delta_phi.
std::pair<int, CorrelationProfile> decode_signaling(const SpectrumFrame& corrected,
                                                    const BipolarSequence& d_d,
                                                    double ambiguity_margin = 1.1);

// 511-point circular correlation out[q] = sum_k conj(b[k]) a[(k+q) mod 511]
// computed with 1024-point transforms: `a` repeated twice plus two zeros,
// `b` padded with 513 zeros.
cvec circ_corr_transform(const cvec& a, const cvec& b);

// Full chain: coarse detection, transform, IFO estimation, IFO correction,
// signaling decode.
DetectionReport detect(const SampleStream& stream, const seq::CarrierSet& cs,
                       const DetectorConfig& cfg = {});

}  // namespace plab::rx
