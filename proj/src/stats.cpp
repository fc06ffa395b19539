// SPDX-License-Identifier: Apache-2.0

#include "mmnc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmnc::stats {

double quantile(std::vector<double> values, double q)
{
    if (values.empty())
        throw std::invalid_argument("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("quantile level must lie in [0, 1]");
    const auto n = values.size();
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
    return values[rank - 1];
}

double median(std::vector<double> values)
{
    return quantile(std::move(values), 0.5);
}

Estimate mean(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("mean of an empty sample");
    const auto n = static_cast<double>(values.size());
    const double m = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() < 2)
        return {m, 0.0};
    double ss = 0.0;
    for (double v : values)
        ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

Estimate ratio(std::span<const double> numerators, std::span<const double> denominators)
{
    if (numerators.size() != denominators.size() || numerators.empty())
        throw std::invalid_argument("ratio estimate needs equally sized, non-empty samples");
    const auto n = static_cast<double>(numerators.size());
    const double sx = std::accumulate(numerators.begin(), numerators.end(), 0.0);
    const double sy = std::accumulate(denominators.begin(), denominators.end(), 0.0);
    if (sy == 0.0)
        throw std::invalid_argument("ratio estimate with zero denominator total");
    const double r = sx / sy;
    if (numerators.size() < 2)
        return {r, 0.0};
    double ss = 0.0;
    for (std::size_t i = 0; i < numerators.size(); ++i)
    {
        const double e = numerators[i] - r * denominators[i];
        ss += e * e;
    }
    return {r, std::sqrt(ss / (n * (n - 1.0))) / (sy / n)};
}

} // namespace mmnc::stats
