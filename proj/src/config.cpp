#include "plab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace plab::config {
namespace {

using harness::ConfigError;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got `" + v + "`");
  }
}

std::int64_t to_int(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const std::int64_t i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got `" + v + "`");
  }
}

void set_key(harness::ExperimentConfig& cfg, const std::string& key, const std::string& value,
             const std::string& where) {
  if (key == "channel") {
    cfg.channel = value;
  } else if (key == "tap") {
    chan::Tap t;
    char c1 = 0, c2 = 0;
    std::istringstream ss(value);
    if (!(ss >> t.delay_us >> c1 >> t.gain_db >> c2 >> t.phase_rad) || c1 != ',' || c2 != ',') {
      throw ConfigError(where + ": tap expects `delay_us, gain_db, phase_rad`");
    }
    cfg.inline_profile.name = "custom";
    cfg.inline_profile.taps.push_back(t);
  } else if (key == "snr_db") {
    cfg.snr_grid_db = parse_snr_grid(value);
    if (cfg.snr_grid_db.empty()) throw ConfigError(where + ": snr_db grid is empty");
  } else if (key == "trials") {
    const auto v = to_int(value, where);
    if (v < 1) throw ConfigError(where + ": trials must be >= 1");
    cfg.trials = static_cast<std::uint64_t>(v);
  } else if (key == "error_target") {
    const auto v = to_int(value, where);
    if (v < 0) throw ConfigError(where + ": error_target must be >= 0");
    cfg.error_target = static_cast<std::uint64_t>(v);
  } else if (key == "base_seed") {
    cfg.base_seed = static_cast<std::uint64_t>(to_int(value, where));
  } else if (key == "signaling") {
    if (value == "random") {
      cfg.signaling = -1;
    } else {
      const auto v = to_int(value, where);
      if (v < 0 || v > 510) throw ConfigError(where + ": signaling must be in [0, 510]");
      cfg.signaling = static_cast<int>(v);
    }
  } else if (key == "cfo") {
    if (value == "random") {
      cfg.cfo_policy = harness::CfoPolicy::kRandom;
    } else if (value == "fixed") {
      cfg.cfo_policy = harness::CfoPolicy::kFixed;
    } else {
      throw ConfigError(where + ": cfo must be `random` or `fixed`");
    }
  } else if (key == "m_int") {
    cfg.cfo_fixed.m_int = static_cast<int>(to_int(value, where));
  } else if (key == "f_frac") {
    cfg.cfo_fixed.f_frac = to_double(value, where);
  } else if (key == "m_int_range") {
    cfg.m_int_range = static_cast<int>(to_int(value, where));
  } else if (key == "ts_us") {
    cfg.sample_interval_us = to_double(value, where);
  } else if (key == "timing_jitter") {
    cfg.timing_jitter = static_cast<int>(to_int(value, where));
  } else if (key == "p_th") {
    cfg.p_th = to_double(value, where);
  } else if (key == "guard_a") {
    cfg.guard_a = static_cast<int>(to_int(value, where));
  } else if (key == "det_threshold") {
    cfg.det_threshold = to_double(value, where);
  } else if (key == "sync") {
    if (value == "pipeline") {
      cfg.sync = harness::SyncMode::kPipeline;
    } else if (value == "perfect") {
      cfg.sync = harness::SyncMode::kPerfect;
    } else {
      throw ConfigError(where + ": sync must be `pipeline` or `perfect`");
    }
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(to_int(value, where));
  } else {
    throw ConfigError(where + ": unknown key `" + key + "`");
  }
}

}  // namespace

std::vector<double> parse_snr_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0) {
      throw harness::ConfigError("snr grid: expected `lo:hi:step` with step > 0");
    }
    for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
    return out;
  }
  std::istringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    out.push_back(to_double(tok, "snr grid"));
  }
  return out;
}

harness::ExperimentConfig parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw harness::ConfigError("cannot open config file: " + path);
  harness::ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw harness::ConfigError(where + ": expected key = value");
    set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
  }
  return cfg;
}

void apply_override(harness::ExperimentConfig& cfg, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) {
    throw harness::ConfigError("override `" + kv + "`: expected key=value");
  }
  set_key(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)), "override " + kv);
}

}  // namespace plab::config
