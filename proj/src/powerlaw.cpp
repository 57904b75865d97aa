#include "cengcn/powerlaw.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cengcn/error.hpp"
#include "cengcn/log.hpp"

namespace cengcn {

double estimate_power_law_alpha(std::span<const double> degrees, double d_min) {
  if (!(d_min > 0.0)) throw DataError("d_min must be positive");
  std::size_t k = 0;
  double log_sum = 0.0;
  for (double d : degrees) {
    if (d >= d_min) {
      ++k;
      log_sum += std::log(d / d_min);
    }
  }
  if (k < 10) {
    throw DataError("power-law fit needs at least 10 values >= d_min, found " + std::to_string(k));
  }
  if (log_sum == 0.0) {
    log::warn("power-law fit degenerate: every value equals d_min; returning +inf");
    return std::numeric_limits<double>::infinity();
  }
  return 1.0 + static_cast<double>(k) / log_sum;
}

double estimate_power_law_alpha(std::span<const double> degrees) {
  double d_min = std::numeric_limits<double>::infinity();
  for (double d : degrees) {
    if (d >= 1.0 && d < d_min) d_min = d;
  }
  if (!std::isfinite(d_min)) throw DataError("power-law fit needs values >= 1");
  return estimate_power_law_alpha(degrees, d_min);
}

}  // namespace cengcn
