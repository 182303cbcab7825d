#pragma once

#include <string>

namespace plab::csv {

// Fixed numeric formatting for CSV output: 6 significant digits, scientific
// notation below 1e-3, so reruns produce identical byte streams.
std::string fmt6(double v);

}  // namespace plab::csv
