#pragma once

#include <string>

#include "plab/harness.hpp"

namespace plab::config {

// Flat key = value experiment configuration, `#` comments, repeated `tap`
// lines for inline channels. Errors carry file:line locations.
harness::ExperimentConfig parse_file(const std::string& path);

// Applies a single `key=value` override on top of a parsed config.
void apply_override(harness::ExperimentConfig& cfg, const std::string& kv);

// Parses an SNR grid: "a,b,c" or "lo:hi:step".
std::vector<double> parse_snr_grid(const std::string& text);

}  // namespace plab::config
