#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "plab/chan.hpp"
#include "plab/types.hpp"

namespace plab::harness {

struct ConfigError : Error {
  using Error::Error;
};

enum class SyncMode { kPipeline, kPerfect };
enum class CfoPolicy { kRandom, kFixed };

struct ExperimentConfig {
  // "AWGN", a built-in profile name, "custom" (inline taps below), or a
  // profile file path.
  std::string channel = "AWGN";
  chan::ChannelProfile inline_profile;

  std::vector<double> snr_grid_db;

  CfoPolicy cfo_policy = CfoPolicy::kRandom;
  CfoSpec cfo_fixed;
  int m_int_range = 10;  // random policy draws m_int uniform in [-range, range]

  int signaling = -1;  // -1 = uniform random per trial, else fixed delta_phi

  std::uint64_t trials = 10000;      // per-point trial cap
  std::uint64_t error_target = 0;    // >0: stop once this many signaling errors
  std::uint64_t base_seed = 1;
  double sample_interval_us = kDefaultSampleIntervalUs;
  int timing_jitter = 0;  // preamble position jitter, +/- samples

  // Estimator knobs.
  double p_th = 0.1;           // path threshold, fraction of the peak tap
  int guard_a = 10;            // timing guard margin, samples
  double det_threshold = 0.2;  // coarse-detection metric threshold

  SyncMode sync = SyncMode::kPipeline;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;  // throws ConfigError before any trial runs
};

struct MetricsRecord {
  double snr_db = 0.0;
  std::uint64_t trials_run = 0;
  double ser = 0.0;
  double ser_lo = 0.0;  // Wilson 95% interval
  double ser_hi = 0.0;
  double ifoer = 0.0;
  double timing_rmse_samples = 0.0;
  double chan_mse = 0.0;
  double wall_ms = 0.0;

  // Diagnostics beyond the CSV schema.
  double coarse_rmse_samples = 0.0;
  std::uint64_t detect_failures = 0;
  std::uint64_t sig_errors = 0;
  std::uint64_t ifo_errors = 0;
};

// Runs one SNR point: seeded trials of build -> impair -> detect -> decode
// -> estimate. A trial with an IFO error always counts as a signaling
// error. Results are a pure function of (config, snr_db) regardless of the
// thread count.
MetricsRecord run_point(const ExperimentConfig& cfg, double snr_db);

// run_point per grid entry, ordered as given.
std::vector<MetricsRecord> run_curve(const ExperimentConfig& cfg);

// PAPR in dB of the assembled preamble for every delta_phi in [0, 510].
std::vector<double> papr_survey(double sample_interval_us = kDefaultSampleIntervalUs);

// Wilson 95% score interval for an error count.
std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials);

// One CSV row per record; schema
//   snr_db,trials,ser,ser_lo,ser_hi,ifoer,timing_rmse,chan_mse,wall_ms
// wall_ms is written as 0 unless include_wall is set, keeping the byte
// stream reproducible.
void write_curve_csv(std::ostream& out, const std::vector<MetricsRecord>& records,
                     bool include_wall = false);

}  // namespace plab::harness
