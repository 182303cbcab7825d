#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plab/rng.hpp"
#include "plab/types.hpp"

namespace plab::chan {

struct UnknownProfile : Error {
  using Error::Error;
};
struct ProfileParseError : Error {
  using Error::Error;
};

struct Tap {
  double delay_us = 0.0;
  double gain_db = 0.0;
  double phase_rad = 0.0;
};

struct ChannelProfile {
  std::string name;
  std::vector<Tap> taps;
};

// Sample-rate CIR, normalized to unit total power. Taps are dense; use
// nonzero() for the sparse view when convolving.
struct DiscreteChannel {
  cvec cir;

  std::size_t length() const { return cir.size(); }
  std::vector<std::pair<std::size_t, cplx>> nonzero() const;
};

// Built-in measured profiles: ITU Vehicular-B, the China digital television
// test 8th channel, and a band-stop channel.
const ChannelProfile& itu_vb();
const ChannelProfile& cdt8();
const ChannelProfile& bsc();

// Case-insensitive lookup of a built-in profile; nullptr when unknown.
const ChannelProfile* find_builtin(std::string_view name);
std::vector<const ChannelProfile*> builtin_profiles();

// Profile file: `name = ...` plus one `tap = delay_us, gain_db, phase_rad`
// line per echo.
ChannelProfile load_profile(const std::string& path);

// Maps taps to sample indices (earliest tap anchored at index 0, nearest-
// sample rounding, colliding indices summed) and normalizes to unit power.
DiscreteChannel discretize(const ChannelProfile& profile, double sample_interval_us);

// Linear convolution with the CIR, truncated to the input length. When
// `history` is given, its tail precedes the signal and models contamination
// from a previous transmission block.
SampleStream apply_multipath(const SampleStream& signal, const DiscreteChannel& ch,
                             const SampleStream* history = nullptr);

// Rotates sample n by exp(j*2*pi*(m_int + f_frac)*n/1024).
SampleStream apply_cfo(const SampleStream& signal, const CfoSpec& cfo);

// Adds circularly symmetric complex Gaussian noise. Signal power is
// measured over the full stream; +inf snr_db is the no-noise path.
SampleStream add_awgn(const SampleStream& signal, double snr_db, rng::Stream& rng);

// Same, with the signal power supplied by the caller (used when the stream
// carries padding that would bias the empirical estimate).
SampleStream add_awgn_with_power(const SampleStream& signal, double signal_power,
                                 double snr_db, rng::Stream& rng);

}  // namespace plab::chan
