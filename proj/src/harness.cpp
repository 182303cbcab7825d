#include "plab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <ostream>
#include <thread>

#include "plab/csv.hpp"
#include "plab/est.hpp"
#include "plab/fft.hpp"
#include "plab/rng.hpp"
#include "plab/rx.hpp"
#include "plab/seq.hpp"
#include "plab/txgen.hpp"

namespace plab::harness {
namespace {

constexpr std::size_t kFrontMargin = 600;
constexpr std::size_t kBackMargin = 600;
constexpr std::uint64_t kChunk = 2048;  // fixed batch between stop checks

int fold_ifo(int m) {
  int p = ((m % 1024) + 1024) % 1024;
  return p < 512 ? p : p - 1024;
}

struct TrialResult {
  bool detected = false;
  bool ifo_err = false;
  bool sig_err = false;
  double coarse_err = 0.0;
  double timing_err = 0.0;
  double mse = 0.0;
};

struct PointContext {
  const ExperimentConfig* cfg = nullptr;
  double snr_db = 0.0;
  std::uint64_t snr_key = 0;
  seq::CarrierSet cs;
  bool has_channel = false;
  chan::DiscreteChannel ch;
  std::vector<std::pair<std::size_t, cplx>> ch_taps;
};

// Ground-truth CIR as the estimator sees it: taps shifted by the window
// offset, carrier phase at the body start folded in, unit scaling.
cvec truth_cir(const PointContext& ctx, long window, long true_start, double f_total) {
  cvec t(kFftSize, cplx{0.0, 0.0});
  const double theta = 2.0 * std::numbers::pi * f_total *
                       static_cast<double>(window + 512) / static_cast<double>(kFftSize);
  const cplx rot = std::polar(1.0, theta);
  const long shift = true_start - window;
  if (ctx.has_channel) {
    for (const auto& [idx, amp] : ctx.ch_taps) {
      const long pos = ((static_cast<long>(idx) + shift) % 1024 + 1024) % 1024;
      t[static_cast<std::size_t>(pos)] += amp * rot;
    }
  } else {
    const long pos = ((shift % 1024) + 1024) % 1024;
    t[static_cast<std::size_t>(pos)] = rot;
  }
  return t;
}

double mse_vs_truth(const cvec& taps, const cvec& truth) {
  const double inv = 1.0 / std::sqrt(static_cast<double>(kFftSize));
  double acc = 0.0;
  for (std::size_t n = 0; n < kFftSize; ++n) {
    acc += std::norm(taps[n] * inv - truth[n]);
  }
  return acc;
}

TrialResult run_trial(const PointContext& ctx, std::uint64_t trial) {
  const ExperimentConfig& cfg = *ctx.cfg;
  rng::Stream rng = rng::Stream::keyed(cfg.base_seed, ctx.snr_key, trial);

  // Draw order is fixed: signaling, m_int, f_frac, jitter, then noise.
  const int dphi = cfg.signaling < 0 ? rng.uniform_int(0, 510) : cfg.signaling;
  CfoSpec cfo = cfg.cfo_fixed;
  if (cfg.cfo_policy == CfoPolicy::kRandom) {
    cfo.m_int = rng.uniform_int(-cfg.m_int_range, cfg.m_int_range);
    cfo.f_frac = rng.uniform(-0.5, 0.5);
  }
  const int jitter =
      cfg.timing_jitter > 0 ? rng.uniform_int(-cfg.timing_jitter, cfg.timing_jitter) : 0;

  const SpectrumFrame spec = txgen::build_spectrum(ctx.cs.d_a, ctx.cs.d_b, dphi);
  const SampleStream tx = txgen::assemble_preamble(spec, cfg.sample_interval_us);

  const long true_start = static_cast<long>(kFrontMargin) + jitter;
  const std::size_t total =
      static_cast<std::size_t>(true_start) + tx.size() + kBackMargin;

  SampleStream stream;
  stream.sample_interval_us = cfg.sample_interval_us;
  stream.samples.assign(total, cplx{0.0, 0.0});
  std::copy(tx.samples.begin(), tx.samples.end(),
            stream.samples.begin() + true_start);

  if (ctx.has_channel) stream = chan::apply_multipath(stream, ctx.ch);
  if (cfo.m_int != 0 || cfo.f_frac != 0.0) stream = chan::apply_cfo(stream, cfo);

  // Noise power referenced to the occupied span, not the padded stream.
  const std::size_t span_end = std::min<std::size_t>(
      total, static_cast<std::size_t>(true_start) + tx.size() +
                 (ctx.has_channel ? ctx.ch.length() : 0));
  double sig_power = 0.0;
  for (std::size_t i = static_cast<std::size_t>(true_start); i < span_end; ++i) {
    sig_power += std::norm(stream.samples[i]);
  }
  sig_power /= static_cast<double>(span_end - static_cast<std::size_t>(true_start));
  if (std::isfinite(ctx.snr_db)) {
    stream = chan::add_awgn_with_power(stream, sig_power, ctx.snr_db, rng);
  }

  TrialResult res;
  const int m_true_folded = fold_ifo(cfo.m_int);
  const SpectrumFrame tx_spec_true = spec;

  rx::CoarseSync coarse;
  if (cfg.sync == SyncMode::kPerfect) {
    coarse.start_index = static_cast<std::size_t>(true_start);
    coarse.ffo_hat = cfo.f_frac;
    coarse.metric_peak = 1.0;
  } else {
    try {
      coarse = rx::coarse_detect(stream, {cfg.det_threshold, 1.1});
    } catch (const rx::NoPeak&) {
      res.ifo_err = res.sig_err = true;
      return res;
    }
  }

  SpectrumFrame x_hat;
  try {
    x_hat = rx::extract_and_transform(stream, coarse);
  } catch (const rx::OutOfBounds&) {
    res.ifo_err = res.sig_err = true;
    return res;
  }
  const cvec y = rx::diff_demod(x_hat);
  auto [m_hat, ifo_prof] = rx::estimate_ifo(y, x_hat, ctx.cs.d_c);
  res.ifo_err = (m_hat != m_true_folded);

  const int m_for_sig = cfg.sync == SyncMode::kPerfect ? m_true_folded : m_hat;
  const SpectrumFrame fixed = rx::correct_ifo(x_hat, m_for_sig);
  auto [dphi_hat, sig_prof] = rx::decode_signaling(fixed, ctx.cs.d_d);
  res.sig_err = res.ifo_err || (dphi_hat != dphi);
  res.detected = true;

  const double f_total = cfo.total();

  if (cfg.sync == SyncMode::kPerfect) {
    // Known signaling and window; isolates estimator noise.
    const SpectrumFrame h = est::ls_estimate(fixed, tx_spec_true);
    const est::CirEstimate cir = est::to_cir(h, coarse.start_index);
    res.mse = mse_vs_truth(cir.taps, truth_cir(ctx, true_start, true_start, f_total));
    res.coarse_err = 0.0;
    res.timing_err = 0.0;
    return res;
  }

  // Pipeline: estimate with the decoded signaling, correct the window from
  // the CIR support, then re-estimate at the corrected window.
  const SpectrumFrame tx_spec_rx = txgen::build_spectrum(ctx.cs.d_a, ctx.cs.d_b, dphi_hat);
  const SpectrumFrame h1 = est::ls_estimate(fixed, tx_spec_rx);
  const est::CirEstimate cir1 = est::to_cir(h1, coarse.start_index);
  const double th = est::relative_threshold(cir1, cfg.p_th);
  const est::PathSet paths = est::detect_paths(cir1, th);
  const int delta = est::timing_offset(paths, cfg.guard_a);

  const long window = static_cast<long>(coarse.start_index) + delta;
  res.coarse_err = static_cast<double>(static_cast<long>(coarse.start_index) - true_start);
  res.timing_err = static_cast<double>(window + cfg.guard_a - true_start);

  if (window < 0 || static_cast<std::size_t>(window) + 1536 > stream.size()) {
    // Corrected window fell off the stream; keep the error stats, reuse the
    // first-pass estimate for the MSE.
    res.mse = mse_vs_truth(cir1.taps,
                           truth_cir(ctx, static_cast<long>(coarse.start_index), true_start, f_total));
    return res;
  }

  rx::CoarseSync sync2 = coarse;
  sync2.start_index = static_cast<std::size_t>(window);
  const SpectrumFrame x2 = rx::extract_and_transform(stream, sync2);
  const SpectrumFrame fixed2 = rx::correct_ifo(x2, m_for_sig);
  const SpectrumFrame h2 = est::ls_estimate(fixed2, tx_spec_rx);
  const est::CirEstimate cir2 = est::to_cir(h2, sync2.start_index);
  res.mse = mse_vs_truth(cir2.taps, truth_cir(ctx, window, true_start, f_total));
  return res;
}

void parallel_for(std::uint64_t begin, std::uint64_t end, int threads,
                  const std::function<void(std::uint64_t)>& fn) {
  const std::uint64_t n = end - begin;
  if (n == 0) return;
  int k = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (k < 1) k = 1;
  k = static_cast<int>(std::min<std::uint64_t>(k, n));
  if (k == 1) {
    for (std::uint64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(k);
  const std::uint64_t step = (n + k - 1) / k;
  for (int t = 0; t < k; ++t) {
    const std::uint64_t lo = begin + step * t;
    const std::uint64_t hi = std::min(end, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::uint64_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (snr_grid_db.empty()) throw ConfigError("config: snr grid is empty");
  if (!(sample_interval_us > 0.0)) throw ConfigError("config: ts_us must be positive");
  if (signaling > 510) throw ConfigError("config: signaling must be in [0, 510] or random");
  if (p_th <= 0.0 || p_th >= 1.0) throw ConfigError("config: p_th must be in (0, 1)");
  if (guard_a < 0) throw ConfigError("config: guard_a must be >= 0");
  if (timing_jitter < 0) throw ConfigError("config: timing_jitter must be >= 0");
  if (m_int_range < 0) throw ConfigError("config: m_int_range must be >= 0");
  if (channel != "custom" && !inline_profile.taps.empty()) {
    throw ConfigError("config: tap lines require channel = custom");
  }
  if (channel == "custom" && inline_profile.taps.empty()) {
    throw ConfigError("config: channel = custom needs at least one tap line");
  }
  const bool awgn = channel == "AWGN" || channel == "awgn";
  if (!awgn && channel != "custom" && chan::find_builtin(channel) == nullptr &&
      !std::filesystem::exists(channel)) {
    throw ConfigError("config: channel `" + channel +
                      "` is not AWGN, a built-in profile, or a readable file");
  }
}

MetricsRecord run_point(const ExperimentConfig& cfg, double snr_db) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  PointContext ctx;
  ctx.cfg = &cfg;
  ctx.snr_db = snr_db;
  // Key trials by the SNR bit pattern so results do not depend on the grid
  // ordering.
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(snr_db));
  std::memcpy(&bits, &snr_db, sizeof(bits));
  ctx.snr_key = bits;
  ctx.cs = seq::default_carrier_set();

  if (!(cfg.channel == "AWGN" || cfg.channel == "awgn")) {
    chan::ChannelProfile prof;
    if (cfg.channel == "custom") {
      prof = cfg.inline_profile;
    } else if (const chan::ChannelProfile* b = chan::find_builtin(cfg.channel)) {
      prof = *b;
    } else {
      prof = chan::load_profile(cfg.channel);
    }
    ctx.ch = chan::discretize(prof, cfg.sample_interval_us);
    ctx.ch_taps = ctx.ch.nonzero();
    ctx.has_channel = true;
  }

  std::vector<TrialResult> results;
  std::uint64_t done = 0;
  std::uint64_t sig_errors = 0;
  while (done < cfg.trials) {
    const std::uint64_t batch = std::min<std::uint64_t>(kChunk, cfg.trials - done);
    results.resize(done + batch);
    parallel_for(done, done + batch, cfg.threads,
                 [&](std::uint64_t t) { results[t] = run_trial(ctx, t); });
    for (std::uint64_t t = done; t < done + batch; ++t) {
      if (results[t].sig_err) ++sig_errors;
    }
    done += batch;
    if (cfg.error_target > 0 && sig_errors >= cfg.error_target) break;
  }

  MetricsRecord rec;
  rec.snr_db = snr_db;
  rec.trials_run = done;
  double timing_sq = 0.0, coarse_sq = 0.0, mse_sum = 0.0;
  std::uint64_t detected = 0;
  for (std::uint64_t t = 0; t < done; ++t) {
    const TrialResult& r = results[t];
    if (r.sig_err) ++rec.sig_errors;
    if (r.ifo_err) ++rec.ifo_errors;
    if (!r.detected) {
      ++rec.detect_failures;
      continue;
    }
    ++detected;
    timing_sq += r.timing_err * r.timing_err;
    coarse_sq += r.coarse_err * r.coarse_err;
    mse_sum += r.mse;
  }
  rec.ser = static_cast<double>(rec.sig_errors) / static_cast<double>(done);
  rec.ifoer = static_cast<double>(rec.ifo_errors) / static_cast<double>(done);
  std::tie(rec.ser_lo, rec.ser_hi) = wilson_interval(rec.sig_errors, done);
  if (detected > 0) {
    rec.timing_rmse_samples = std::sqrt(timing_sq / static_cast<double>(detected));
    rec.coarse_rmse_samples = std::sqrt(coarse_sq / static_cast<double>(detected));
    rec.chan_mse = mse_sum / static_cast<double>(detected);
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rec;
}

std::vector<MetricsRecord> run_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<MetricsRecord> out;
  out.reserve(cfg.snr_grid_db.size());
  for (double snr : cfg.snr_grid_db) out.push_back(run_point(cfg, snr));
  return out;
}

std::vector<double> papr_survey(double sample_interval_us) {
  const seq::CarrierSet cs = seq::default_carrier_set();
  std::vector<double> out(511);
  for (int dphi = 0; dphi < 511; ++dphi) {
    const SpectrumFrame f = txgen::build_spectrum(cs.d_a, cs.d_b, dphi);
    out[dphi] = txgen::papr_db(txgen::assemble_preamble(f, sample_interval_us));
  }
  return out;
}

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 97.5th percentile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void write_curve_csv(std::ostream& out, const std::vector<MetricsRecord>& records,
                     bool include_wall) {
  out << "# schema=1\n";
  out << "snr_db,trials,ser,ser_lo,ser_hi,ifoer,timing_rmse,chan_mse,wall_ms\n";
  for (const MetricsRecord& r : records) {
    out << csv::fmt6(r.snr_db) << ',' << r.trials_run << ',' << csv::fmt6(r.ser) << ','
        << csv::fmt6(r.ser_lo) << ',' << csv::fmt6(r.ser_hi) << ',' << csv::fmt6(r.ifoer)
        << ',' << csv::fmt6(r.timing_rmse_samples) << ',' << csv::fmt6(r.chan_mse) << ','
        << csv::fmt6(include_wall ? r.wall_ms : 0.0) << '\n';
  }
}

}  // namespace plab::harness
