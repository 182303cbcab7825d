#include "plab/rx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "plab/fft.hpp"

namespace plab::rx {
namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

// |peak| / |runner-up| over a magnitude profile.
double peak_ratio_of(const cvec& values, std::size_t peak) {
  double second = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == peak) continue;
    second = std::max(second, std::abs(values[i]));
  }
  const double p = std::abs(values[peak]);
  return second > 0.0 ? p / second : std::numeric_limits<double>::infinity();
}

}  // namespace

CoarseSync coarse_detect(const SampleStream& stream, const DetectorConfig& cfg) {
  const std::size_t n = stream.size();
  if (n < 2048) throw Error("coarse_detect: stream shorter than one preamble");

  // Prefix sums for the two lag products and the energy, so every candidate
  // start evaluates in O(1).
  const std::size_t n1 = n - 1024;  // valid lag-1024 products
  const std::size_t n2 = n - 1536;  // valid lag-512 postfix products
  cvec ps1(n1 + 1, cplx{0.0, 0.0});
  cvec ps2(n2 + 1, cplx{0.0, 0.0});
  std::vector<double> pe(n + 1, 0.0);
  const auto& r = stream.samples;
  for (std::size_t i = 0; i < n1; ++i) ps1[i + 1] = ps1[i] + std::conj(r[i]) * r[i + 1024];
  for (std::size_t i = 0; i < n2; ++i) ps2[i + 1] = ps2[i] + std::conj(r[i + 1024]) * r[i + 1536];
  for (std::size_t i = 0; i < n; ++i) pe[i + 1] = pe[i] + std::norm(r[i]);

  const std::size_t cand = n - 2048 + 1;
  std::vector<double> metric(cand, 0.0);
  for (std::size_t d = 0; d < cand; ++d) {
    const cplx c1 = ps1[d + 512] - ps1[d];
    const cplx c2 = ps2[d + 512] - ps2[d];
    const double ea = pe[d + 512] - pe[d];
    const double eb = pe[d + 1536] - pe[d + 1024];
    const double ec = pe[d + 2048] - pe[d + 1536];
    const double den = 0.5 * ea + eb + 0.5 * ec;
    metric[d] = den > 1e-30 ? (std::abs(c1) + std::abs(c2)) / den : 0.0;
  }

  std::size_t best = 0;
  for (std::size_t d = 1; d < cand; ++d) {
    if (metric[d] > metric[best]) best = d;
  }
  if (metric[best] < cfg.threshold) {
    throw NoPeak("coarse_detect: peak metric " + std::to_string(metric[best]) +
                 " below threshold");
  }
  // Center of an exact-tie plateau (flat maxima occur in noiseless setups).
  std::size_t lo = best, hi = best;
  const double tie = metric[best] - 1e-12;
  while (lo > 0 && metric[lo - 1] >= tie) --lo;
  while (hi + 1 < cand && metric[hi + 1] >= tie) ++hi;
  const std::size_t start = (lo + hi) / 2;

  CoarseSync out;
  out.start_index = start;
  out.metric_peak = metric[start];
  const cplx c1 = ps1[start + 512] - ps1[start];
  out.ffo_hat = std::arg(c1) / kTwoPi;
  return out;
}

SpectrumFrame extract_and_transform(const SampleStream& stream, const CoarseSync& sync) {
  if (sync.start_index + 1536 > stream.size()) {
    throw OutOfBounds("extract_and_transform: body extends past stream end");
  }
  cvec body(kFftSize);
  const double w = -kTwoPi * sync.ffo_hat / static_cast<double>(kFftSize);
  for (std::size_t u = 0; u < kFftSize; ++u) {
    body[u] = stream.samples[sync.start_index + 512 + u] *
              std::polar(1.0, w * static_cast<double>(u));
  }
  SpectrumFrame out;
  out.bins = fft::forward_unitary(body);
  return out;
}

cvec diff_demod(const SpectrumFrame& spectrum) {
  if (spectrum.size() != kFftSize) throw BadLength("diff_demod: need 1024 bins");
  cvec y(kFftSize);
  for (std::size_t k = 0; k < kFftSize; ++k) {
    y[k] = spectrum.bins[k] * std::conj(spectrum.bins[(k + 1) % kFftSize]);
  }
  return y;
}

std::pair<int, CorrelationProfile> estimate_ifo(const cvec& y, const SpectrumFrame& spectrum,
                                                const BipolarSequence& d_c,
                                                double ambiguity_margin) {
  if (y.size() != kFftSize || spectrum.size() != kFftSize) {
    throw BadLength("estimate_ifo: need 1024-point inputs");
  }
  if (d_c.length() != kSeqLen) throw BadLength("estimate_ifo: d_c must have 511 chips");

  // Numerator for all 1024 lags at once: N-point circular correlation of Y
  // against the zero-padded local sequence, done in the transform domain.
  cvec local(kFftSize, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < kSeqLen; ++k) local[k] = static_cast<double>(d_c.chips[k]);
  const cvec fy = fft::forward_unitary(y);
  const cvec fl = fft::forward_unitary(local);
  cvec prod(kFftSize);
  for (std::size_t k = 0; k < kFftSize; ++k) prod[k] = fy[k] * std::conj(fl[k]);
  cvec num = fft::inverse_unitary(prod);
  const double scale = std::sqrt(static_cast<double>(kFftSize));
  for (auto& v : num) v *= scale;

  // Sliding 511-bin received power for the denominator.
  std::vector<double> p2(2 * kFftSize + 1, 0.0);
  for (std::size_t i = 0; i < 2 * kFftSize; ++i) {
    p2[i + 1] = p2[i] + std::norm(spectrum.bins[i % kFftSize]);
  }

  CorrelationProfile prof;
  prof.values.resize(kFftSize);
  for (std::size_t l = 0; l < kFftSize; ++l) {
    const double den = p2[l + kSeqLen] - p2[l];
    prof.values[l] = den > 1e-30 ? num[l] / den : cplx{0.0, 0.0};
  }
  std::size_t peak = 0;
  for (std::size_t l = 1; l < kFftSize; ++l) {
    if (std::abs(prof.values[l]) > std::abs(prof.values[peak])) peak = l;
  }
  prof.peak_index = peak;
  prof.peak_ratio = peak_ratio_of(prof.values, peak);
  prof.ambiguous = prof.peak_ratio < ambiguity_margin;

  const int m_hat = peak < kFftSize / 2 ? static_cast<int>(peak)
                                        : static_cast<int>(peak) - static_cast<int>(kFftSize);
  return {m_hat, prof};
}

SpectrumFrame correct_ifo(const SpectrumFrame& spectrum, int m_int_hat) {
  if (spectrum.size() != kFftSize) throw BadLength("correct_ifo: need 1024 bins");
  SpectrumFrame out;
  out.bins.resize(kFftSize);
  const int n = static_cast<int>(kFftSize);
  for (int k = 0; k < n; ++k) {
    const int src = ((k + m_int_hat) % n + n) % n;
    out.bins[k] = spectrum.bins[src];
  }
  return out;
}

std::pair<int, CorrelationProfile> decode_signaling(const SpectrumFrame& corrected,
                                                    const BipolarSequence& d_d,
                                                    double ambiguity_margin) {
  if (corrected.size() != kFftSize) throw BadLength("decode_signaling: need 1024 bins");
  if (d_d.length() != kSeqLen) throw BadLength("decode_signaling: d_d must have 511 chips");

  // Extract the signaling block and differentially demodulate it circularly
  // within the block, so the local reference is d_d at shift delta_phi.
  cvec c(kSeqLen);
  double den = 0.0;
  for (std::size_t k = 0; k < kSeqLen; ++k) {
    c[k] = corrected.bins[512 + k];
    den += std::norm(c[k]);
  }
  cvec cd(kSeqLen);
  for (std::size_t k = 0; k < kSeqLen; ++k) {
    cd[k] = c[k] * std::conj(c[(k + 1) % kSeqLen]);
  }

  cvec local(kSeqLen);
  for (std::size_t k = 0; k < kSeqLen; ++k) local[k] = static_cast<double>(d_d.chips[k]);

  // corr[q] = sum_k conj(cd[k]) d_d[(k+q) mod M]; conjugate recovers
  // R_q = sum_k d_d[(k+q) mod M] cd[k], which peaks at q = delta_phi.
  const cvec corr = circ_corr_transform(local, cd);

  CorrelationProfile prof;
  prof.values.resize(kSeqLen);
  const double inv = den > 1e-30 ? 1.0 / den : 0.0;
  for (std::size_t q = 0; q < kSeqLen; ++q) {
    prof.values[q] = std::conj(corr[q]) * inv;
  }
  std::size_t peak = 0;
  for (std::size_t q = 1; q < kSeqLen; ++q) {
    if (std::abs(prof.values[q]) > std::abs(prof.values[peak])) peak = q;
  }
  prof.peak_index = peak;
  prof.peak_ratio = peak_ratio_of(prof.values, peak);
  prof.ambiguous = prof.peak_ratio < ambiguity_margin;
  return {static_cast<int>(peak), prof};
}

cvec circ_corr_transform(const cvec& a, const cvec& b) {
  if (a.size() != kSeqLen || b.size() != kSeqLen) {
    throw BadLength("circ_corr_transform: inputs must have length 511");
  }
  cvec ax(kFftSize, cplx{0.0, 0.0});
  std::copy(a.begin(), a.end(), ax.begin());
  std::copy(a.begin(), a.end(), ax.begin() + kSeqLen);  // repeated twice + 2 zeros
  cvec bx(kFftSize, cplx{0.0, 0.0});
  std::copy(b.begin(), b.end(), bx.begin());  // padded with 513 zeros

  const cvec fa = fft::forward_unitary(ax);
  const cvec fb = fft::forward_unitary(bx);
  cvec prod(kFftSize);
  for (std::size_t k = 0; k < kFftSize; ++k) prod[k] = fa[k] * std::conj(fb[k]);
  cvec corr = fft::inverse_unitary(prod);

  const double scale = std::sqrt(static_cast<double>(kFftSize));
  cvec out(kSeqLen);
  for (std::size_t q = 0; q < kSeqLen; ++q) out[q] = corr[q] * scale;
  return out;
}

DetectionReport detect(const SampleStream& stream, const seq::CarrierSet& cs,
                       const DetectorConfig& cfg) {
  DetectionReport rep;
  rep.coarse = coarse_detect(stream, cfg);
  const SpectrumFrame x_hat = extract_and_transform(stream, rep.coarse);
  const cvec y = diff_demod(x_hat);
  auto [m_hat, ifo_prof] = estimate_ifo(y, x_hat, cs.d_c, cfg.ambiguity_margin);
  rep.m_int_hat = m_hat;
  rep.ifo_profile = std::move(ifo_prof);
  const SpectrumFrame fixed = correct_ifo(x_hat, rep.m_int_hat);
  auto [dphi, sig_prof] = decode_signaling(fixed, cs.d_d, cfg.ambiguity_margin);
  rep.delta_phi_hat = dphi;
  rep.sig_profile = std::move(sig_prof);
  return rep;
}

}  // namespace plab::rx
