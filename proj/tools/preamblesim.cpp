// Command-line front end for the preamble simulation lab: Monte Carlo
// experiment runs, closed-form performance curves, PAPR surveys, channel
// profile inspection and single-shot loopback inspection.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "plab/chan.hpp"
#include "plab/config.hpp"
#include "plab/csv.hpp"
#include "plab/est.hpp"
#include "plab/harness.hpp"
#include "plab/rng.hpp"
#include "plab/rx.hpp"
#include "plab/seq.hpp"
#include "plab/theory.hpp"
#include "plab/txgen.hpp"

namespace {

using plab::csv::fmt6;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

// --out paths resolve against PREAMBLESIM_OUTDIR when set and relative.
std::string resolve_out(const std::string& path) {
  const char* outdir = std::getenv("PREAMBLESIM_OUTDIR");
  if (outdir == nullptr || path.empty() || std::filesystem::path(path).is_absolute()) {
    return path;
  }
  return (std::filesystem::path(outdir) / path).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw plab::Error("cannot open output file: " + path);
  return f;
}

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& overrides,
                 std::string out_path, std::optional<std::uint64_t> seed,
                 std::optional<double> ts_us, std::optional<int> threads, bool with_wall) {
  plab::harness::ExperimentConfig cfg = plab::config::parse_file(config_path);
  for (const auto& kv : overrides) plab::config::apply_override(cfg, kv);
  if (seed) cfg.base_seed = *seed;
  if (ts_us) cfg.sample_interval_us = *ts_us;
  if (threads) cfg.threads = *threads;
  cfg.validate();

  const auto records = plab::harness::run_curve(cfg);
  out_path = resolve_out(out_path);
  auto f = open_out(out_path);
  plab::harness::write_curve_csv(f, records, with_wall);
  std::cerr << "wrote " << records.size() << " rows to " << out_path << "\n";
  return 0;
}

int cmd_theory(const std::string& grid_text, int m, int n, int l_h, std::string out_path) {
  const std::vector<double> grid = plab::config::parse_snr_grid(grid_text);
  if (grid.empty()) throw plab::harness::ConfigError("theory: empty snr grid");

  out_path = resolve_out(out_path);
  auto f = open_out(out_path);
  f << "# schema=1\n";
  f << "snr_db,p_false_ifo,p_err_sig,p_false_sig,crlb\n";
  int warnings = 0;
  for (double snr : grid) {
    const auto p = plab::theory::stat_params(snr, m, n);
    double pi = std::nan(""), ps = std::nan(""), pf = std::nan("");
    try {
      pi = plab::theory::p_false_ifo(p, n);
      ps = plab::theory::p_err_sig(p, m);
      pf = plab::theory::p_false_sig(pi, ps);
    } catch (const plab::theory::QuadratureFailure& e) {
      ++warnings;
      std::cerr << "warning: snr " << snr << " dB: " << e.what() << "\n";
    }
    f << fmt6(snr) << ',' << fmt6(pi) << ',' << fmt6(ps) << ',' << fmt6(pf) << ','
      << fmt6(plab::theory::crlb(l_h, n, snr)) << '\n';
  }
  if (warnings > 0) std::cerr << warnings << " quadrature warning(s)\n";
  return 0;
}

int cmd_papr(std::string out_path, std::string hist_path, double ts_us) {
  const std::vector<double> papr = plab::harness::papr_survey(ts_us);

  out_path = resolve_out(out_path);
  auto f = open_out(out_path);
  f << "# schema=1\n";
  f << "mode,papr_db\n";
  for (std::size_t i = 0; i < papr.size(); ++i) {
    f << i << ',' << fmt6(papr[i]) << '\n';
  }

  // 0.5 dB bins spanning the observed range.
  double lo = papr[0], hi = papr[0];
  for (double v : papr) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double bin = 0.5;
  const double start = std::floor(lo / bin) * bin;
  const auto nbins = static_cast<std::size_t>(std::ceil((hi - start) / bin)) + 1;
  std::vector<std::size_t> counts(nbins, 0);
  for (double v : papr) {
    auto idx = static_cast<std::size_t>((v - start) / bin);
    if (idx >= nbins) idx = nbins - 1;
    ++counts[idx];
  }
  hist_path = resolve_out(hist_path);
  auto h = open_out(hist_path);
  h << "# schema=1\n";
  h << "bin_lo_db,bin_hi_db,count\n";
  for (std::size_t i = 0; i < nbins; ++i) {
    h << fmt6(start + bin * static_cast<double>(i)) << ','
      << fmt6(start + bin * static_cast<double>(i + 1)) << ',' << counts[i] << '\n';
  }
  std::cerr << "wrote " << papr.size() << " modes to " << out_path << "\n";
  return 0;
}

int cmd_channels(const std::string& name, double ts_us) {
  std::vector<const plab::chan::ChannelProfile*> profiles;
  if (name.empty()) {
    profiles = plab::chan::builtin_profiles();
  } else {
    const auto* p = plab::chan::find_builtin(name);
    if (p == nullptr) {
      throw plab::chan::UnknownProfile("unknown channel profile: " + name);
    }
    profiles.push_back(p);
  }
  for (const auto* p : profiles) {
    const auto ch = plab::chan::discretize(*p, ts_us);
    const auto taps = ch.nonzero();
    std::cout << p->name << "  (" << p->taps.size() << " taps, delay spread "
              << taps.back().first << " samples at ts = " << fmt6(ts_us) << " us)\n";
    std::cout << "  delay_us   gain_db   phase_rad   sample_index\n";
    double min_delay = p->taps.front().delay_us;
    for (const auto& t : p->taps) min_delay = std::min(min_delay, t.delay_us);
    for (const auto& t : p->taps) {
      const auto idx = static_cast<long>(std::llround((t.delay_us - min_delay) / ts_us));
      std::printf("  %8.4f  %8.4f  %10.4f   %12ld\n", t.delay_us, t.gain_db, t.phase_rad, idx);
    }
  }
  return 0;
}

int cmd_inspect(int delta_phi, int m_int, double f_frac, double snr_db,
                const std::string& channel, std::uint64_t seed, double ts_us) {
  const auto cs = plab::seq::default_carrier_set();
  const auto spec = plab::txgen::build_spectrum(cs.d_a, cs.d_b, delta_phi);
  const auto tx = plab::txgen::assemble_preamble(spec, ts_us);

  std::cout << "preamble: 2048 samples, delta_phi " << delta_phi << "\n";
  std::cout << "  papr: " << fmt6(plab::txgen::papr_db(tx)) << " dB\n";
  double body_power = 0.0;
  for (std::size_t i = 512; i < 1536; ++i) body_power += std::norm(tx.samples[i]);
  std::cout << "  body power per sample: " << fmt6(body_power / 1024.0) << "\n";
  double seg = 0.0;
  for (std::size_t i = 0; i < 512; ++i) {
    seg = std::max(seg, std::abs(tx.samples[i] - tx.samples[i + 1024]));
    seg = std::max(seg, std::abs(tx.samples[i] - tx.samples[i + 1536]));
  }
  std::cout << "  prefix/postfix max deviation: " << fmt6(seg) << "\n";

  // Loopback through the requested impairments.
  plab::harness::ExperimentConfig cfg;
  cfg.snr_grid_db = {snr_db};
  cfg.signaling = delta_phi;
  cfg.cfo_policy = plab::harness::CfoPolicy::kFixed;
  cfg.cfo_fixed = {m_int, f_frac};
  cfg.trials = 1;
  cfg.base_seed = seed;
  cfg.channel = channel;
  cfg.sample_interval_us = ts_us;
  cfg.validate();

  plab::SampleStream stream;
  stream.sample_interval_us = ts_us;
  stream.samples.assign(600 + tx.size() + 600, {0.0, 0.0});
  std::copy(tx.samples.begin(), tx.samples.end(), stream.samples.begin() + 600);
  if (!(channel == "AWGN" || channel == "awgn")) {
    const auto* prof = plab::chan::find_builtin(channel);
    if (prof == nullptr) throw plab::chan::UnknownProfile("unknown channel profile: " + channel);
    stream = plab::chan::apply_multipath(stream, plab::chan::discretize(*prof, ts_us));
  }
  if (m_int != 0 || f_frac != 0.0) stream = plab::chan::apply_cfo(stream, {m_int, f_frac});
  plab::rng::Stream rng = plab::rng::Stream::keyed(seed, 0, 0);
  if (std::isfinite(snr_db)) stream = plab::chan::add_awgn(stream, snr_db, rng);

  const auto rep = plab::rx::detect(stream, cs, {0.2, 1.1});
  std::cout << "detection:\n";
  std::cout << "  coarse start " << rep.coarse.start_index << " (true 600), metric "
            << fmt6(rep.coarse.metric_peak) << "\n";
  std::cout << "  ffo_hat " << fmt6(rep.coarse.ffo_hat) << " (true " << fmt6(f_frac) << ")\n";
  std::cout << "  m_int_hat " << rep.m_int_hat << " (true " << m_int << "), peak ratio "
            << fmt6(rep.ifo_profile.peak_ratio) << "\n";
  std::cout << "  delta_phi_hat " << rep.delta_phi_hat << " (true " << delta_phi
            << "), peak ratio " << fmt6(rep.sig_profile.peak_ratio) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM preamble laboratory: synchronization, signaling and channel estimation"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a Monte Carlo experiment from a config file");
  std::string sim_config;
  std::vector<std::string> sim_overrides;
  std::string sim_out = "curve.csv";
  std::optional<std::uint64_t> sim_seed;
  std::optional<double> sim_ts;
  std::optional<int> sim_threads;
  bool sim_wall = false;
  sim->add_option("--config", sim_config, "experiment config file")->required();
  sim->add_option("--override", sim_overrides, "key=value override, applied after the file");
  sim->add_option("--out", sim_out, "output CSV path");
  sim->add_option("--seed", sim_seed, "base seed override");
  sim->add_option("--ts-us", sim_ts, "sample interval override, microseconds");
  sim->add_option("--threads", sim_threads, "worker thread count (0 = hardware)");
  sim->add_flag("--timing", sim_wall, "record wall time in the wall_ms column");

  // theory
  auto* theo = app.add_subcommand("theory", "closed-form error probabilities and CRLB");
  std::string theo_grid = "-9:-4:0.5";
  int theo_m = 511, theo_n = 1024, theo_lh = 512;
  std::string theo_out = "theory.csv";
  theo->add_option("--snr", theo_grid, "SNR grid: `a,b,c` or `lo:hi:step`");
  theo->add_option("--m", theo_m, "sequence length");
  theo->add_option("--n", theo_n, "transform size");
  theo->add_option("--lh", theo_lh, "channel length for the CRLB");
  theo->add_option("--out", theo_out, "output CSV path");

  // papr
  auto* papr = app.add_subcommand("papr", "PAPR of all 511 signaling modes");
  std::string papr_out = "papr.csv";
  std::string papr_hist = "papr_hist.csv";
  double papr_ts = plab::kDefaultSampleIntervalUs;
  papr->add_option("--out", papr_out, "per-mode CSV path");
  papr->add_option("--hist", papr_hist, "histogram CSV path (0.5 dB bins)");
  papr->add_option("--ts-us", papr_ts, "sample interval, microseconds");

  // channels
  auto* chans = app.add_subcommand("channels", "print built-in channel profiles");
  std::string chan_name;
  double chan_ts = plab::kDefaultSampleIntervalUs;
  chans->add_option("name", chan_name, "profile name (default: all)");
  chans->add_option("--ts-us", chan_ts, "sample interval, microseconds");

  // inspect
  auto* insp = app.add_subcommand("inspect", "build one preamble and run loopback detection");
  int insp_dphi = 0, insp_m = 0;
  double insp_f = 0.0, insp_snr = std::numeric_limits<double>::infinity();
  std::string insp_chan = "AWGN";
  std::uint64_t insp_seed = 1;
  double insp_ts = plab::kDefaultSampleIntervalUs;
  insp->add_option("--delta-phi", insp_dphi, "signaling value [0, 510]")
      ->check(CLI::Range(0, 510));
  insp->add_option("--m-int", insp_m, "integer CFO");
  insp->add_option("--f-frac", insp_f, "fractional CFO");
  insp->add_option("--snr", insp_snr, "SNR in dB (default: no noise)");
  insp->add_option("--channel", insp_chan, "AWGN or a built-in profile");
  insp->add_option("--seed", insp_seed, "noise seed");
  insp->add_option("--ts-us", insp_ts, "sample interval, microseconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_config, sim_overrides, sim_out, sim_seed, sim_ts, sim_threads,
                          sim_wall);
    }
    if (theo->parsed()) return cmd_theory(theo_grid, theo_m, theo_n, theo_lh, theo_out);
    if (papr->parsed()) return cmd_papr(papr_out, papr_hist, papr_ts);
    if (chans->parsed()) return cmd_channels(chan_name, chan_ts);
    if (insp->parsed()) {
      return cmd_inspect(insp_dphi, insp_m, insp_f, insp_snr, insp_chan, insp_seed, insp_ts);
    }
  } catch (const plab::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const plab::chan::UnknownProfile& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const plab::chan::ProfileParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
