#include "plab/chan.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace plab::chan {

std::vector<std::pair<std::size_t, cplx>> DiscreteChannel::nonzero() const {
  std::vector<std::pair<std::size_t, cplx>> out;
  for (std::size_t i = 0; i < cir.size(); ++i) {
    if (cir[i] != cplx{0.0, 0.0}) out.emplace_back(i, cir[i]);
  }
  return out;
}

namespace {
const double kPi = std::numbers::pi;
}

const ChannelProfile& itu_vb() {
  static const ChannelProfile p{"ITU-VB",
                                {{0.00, -2.5, 0.0},
                                 {0.30, 0.0, 0.0},
                                 {8.90, -12.8, 0.0},
                                 {12.90, -10.0, 0.0},
                                 {17.10, -25.2, 0.0},
                                 {20.00, -16.0, 0.0}}};
  return p;
}

const ChannelProfile& cdt8() {
  static const ChannelProfile p{"CDT-8",
                                {{-1.80, -18.0, 0.0},
                                 {0.00, 0.0, 0.0},
                                 {0.15, -20.0, 0.0},
                                 {1.80, -20.0, 0.0},
                                 {5.70, -10.0, 0.0},
                                 {30.00, 0.0, 0.0}}};
  return p;
}

const ChannelProfile& bsc() {
  static const ChannelProfile p{"BSC",
                                {{0.1314, -18.8500, 0.0},
                                 {0.6570, -13.8471, kPi},
                                 {1.1827, -4.0248, 0.0},
                                 {1.4455, 0.0000, 0.0},
                                 {1.7083, -4.0248, 0.0},
                                 {2.2339, -13.8471, kPi},
                                 {2.7595, -18.8500, 0.0}}};
  return p;
}

std::vector<const ChannelProfile*> builtin_profiles() {
  return {&itu_vb(), &cdt8(), &bsc()};
}

const ChannelProfile* find_builtin(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
  };
  const std::string want = lower(name);
  for (const ChannelProfile* p : builtin_profiles()) {
    if (lower(p->name) == want) return p;
  }
  return nullptr;
}

ChannelProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProfileParseError("cannot open channel profile: " + path);
  ChannelProfile p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) {
      throw ProfileParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "name") {
      p.name = val;
    } else if (key == "tap") {
      Tap t;
      char c1 = 0, c2 = 0;
      std::istringstream ss(val);
      if (!(ss >> t.delay_us >> c1 >> t.gain_db >> c2 >> t.phase_rad) || c1 != ',' || c2 != ',') {
        throw ProfileParseError(path + ":" + std::to_string(lineno) +
                                ": tap expects `delay_us, gain_db, phase_rad`");
      }
      p.taps.push_back(t);
    } else {
      throw ProfileParseError(path + ":" + std::to_string(lineno) + ": unknown key `" + key + "`");
    }
  }
  if (p.taps.empty()) {
    throw ProfileParseError(path + ": profile has no taps");
  }
  if (p.name.empty()) p.name = path;
  return p;
}

DiscreteChannel discretize(const ChannelProfile& profile, double sample_interval_us) {
  if (profile.taps.empty()) throw Error("discretize: profile has no taps");
  if (!(sample_interval_us > 0.0)) throw Error("discretize: sample interval must be positive");

  double min_delay = std::numeric_limits<double>::infinity();
  for (const Tap& t : profile.taps) {
    if (!std::isfinite(t.delay_us)) throw Error("discretize: non-finite tap delay");
    min_delay = std::min(min_delay, t.delay_us);
  }

  std::size_t max_idx = 0;
  std::vector<std::pair<std::size_t, cplx>> mapped;
  for (const Tap& t : profile.taps) {
    const auto idx = static_cast<std::size_t>(
        std::llround((t.delay_us - min_delay) / sample_interval_us));
    const cplx amp = std::polar(std::pow(10.0, t.gain_db / 20.0), t.phase_rad);
    mapped.emplace_back(idx, amp);
    max_idx = std::max(max_idx, idx);
  }

  DiscreteChannel ch;
  ch.cir.assign(max_idx + 1, cplx{0.0, 0.0});
  for (const auto& [idx, amp] : mapped) ch.cir[idx] += amp;

  double power = 0.0;
  for (const auto& c : ch.cir) power += std::norm(c);
  const double scale = 1.0 / std::sqrt(power);
  for (auto& c : ch.cir) c *= scale;
  return ch;
}

SampleStream apply_multipath(const SampleStream& signal, const DiscreteChannel& ch,
                             const SampleStream* history) {
  const auto taps = ch.nonzero();
  SampleStream out;
  out.sample_interval_us = signal.sample_interval_us;
  out.samples.assign(signal.size(), cplx{0.0, 0.0});

  const std::size_t n = signal.size();
  for (const auto& [d, amp] : taps) {
    for (std::size_t i = d; i < n; ++i) {
      out.samples[i] += amp * signal.samples[i - d];
    }
  }
  if (history != nullptr && history->size() > 0) {
    // Tail of the previous block leaks into the first L-1 output samples.
    const std::size_t h = history->size();
    for (const auto& [d, amp] : taps) {
      for (std::size_t i = 0; i < d && i < n; ++i) {
        const std::size_t back = d - i;  // history index from the end
        if (back <= h) out.samples[i] += amp * history->samples[h - back];
      }
    }
  }
  return out;
}

SampleStream apply_cfo(const SampleStream& signal, const CfoSpec& cfo) {
  SampleStream out;
  out.sample_interval_us = signal.sample_interval_us;
  out.samples.resize(signal.size());
  const double w = 2.0 * kPi * cfo.total() / static_cast<double>(kFftSize);
  for (std::size_t n = 0; n < signal.size(); ++n) {
    out.samples[n] = signal.samples[n] * std::polar(1.0, w * static_cast<double>(n));
  }
  return out;
}

SampleStream add_awgn(const SampleStream& signal, double snr_db, rng::Stream& rng) {
  double power = 0.0;
  for (const auto& s : signal.samples) power += std::norm(s);
  power /= static_cast<double>(std::max<std::size_t>(signal.size(), 1));
  return add_awgn_with_power(signal, power, snr_db, rng);
}

SampleStream add_awgn_with_power(const SampleStream& signal, double signal_power,
                                 double snr_db, rng::Stream& rng) {
  if (std::isinf(snr_db) && snr_db > 0) return signal;
  const double sigma_w2 = signal_power * std::pow(10.0, -snr_db / 10.0);
  SampleStream out;
  out.sample_interval_us = signal.sample_interval_us;
  out.samples.resize(signal.size());
  for (std::size_t n = 0; n < signal.size(); ++n) {
    out.samples[n] = signal.samples[n] + rng.cgaussian(sigma_w2);
  }
  return out;
}

}  // namespace plab::chan
