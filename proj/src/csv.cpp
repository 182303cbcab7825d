#include "plab/csv.hpp"

#include <cmath>
#include <cstdio>

namespace plab::csv {

std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[48];
  if (std::abs(v) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.5e", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

}  // namespace plab::csv
