#pragma once

#include <span>

namespace cengcn {

/// Continuous maximum-likelihood power-law exponent over the k values >= d_min:
///   alpha = 1 + k / sum ln(d_i / d_min).
/// Throws DataError for d_min <= 0 or fewer than 10 qualifying values.
/// Returns +infinity (with a warning) when every qualifying value equals d_min.
double estimate_power_law_alpha(std::span<const double> degrees, double d_min);

/// Uses the minimum observed value >= 1 as d_min.
double estimate_power_law_alpha(std::span<const double> degrees);

}  // namespace cengcn
