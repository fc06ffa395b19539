// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace mmnc::stats {

/// Nearest-rank quantile: the ceil(q * n)-th smallest value (1-based, at least
/// the first). Throws std::invalid_argument on empty input or q outside [0, 1].
double quantile(std::vector<double> values, double q);

double median(std::vector<double> values);

struct Estimate
{
    double value = 0.0;
    double standard_error = 0.0;
};

/// Sample mean with its standard error.
Estimate mean(std::span<const double> values);

/// sum(num) / sum(den) with the delta-method standard error
///   sqrt(sum (num_i - R den_i)^2 / (n (n - 1))) / mean(den).
Estimate ratio(std::span<const double> numerators, std::span<const double> denominators);

} // namespace mmnc::stats
