// SPDX-License-Identifier: Apache-2.0

#include "mmnc/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmnc::deployment {

void StreetScenario::validate() const
{
    if (relay_count < 1)
        throw std::invalid_argument("relay count must be at least 1");
    if (!(inter_relay_distance_m > 0.0))
        throw std::invalid_argument("inter-relay distance must be positive");
    if (!(street_width_m > 0.0))
        throw std::invalid_argument("street width must be positive");
    if (sidewalk_offset_m < 0.0 || 2.0 * sidewalk_offset_m > street_width_m)
        throw std::invalid_argument("sidewalk offset must lie within the street");
    if (device_count < 0)
        throw std::invalid_argument("device count must be non-negative");
}

double StreetScenario::street_length() const
{
    const double d = inter_relay_distance_m;
    const double a = (side_a_relays() - 1) * d;
    const double b = side_b_relays() > 0 ? (side_b_relays() - 1) * d + d / 2.0 : 0.0;
    return std::max({a, b, d / 2.0});
}

std::vector<Position> place_relays(const StreetScenario& scenario)
{
    scenario.validate();
    const double d = scenario.inter_relay_distance_m;
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(scenario.relay_count));
    for (int i = 0; i < scenario.side_a_relays(); ++i)
        out.push_back({i * d, 0.0});
    for (int i = 0; i < scenario.side_b_relays(); ++i)
        out.push_back({i * d + d / 2.0, scenario.street_width_m});
    return out;
}

std::vector<Position> drop_devices(const StreetScenario& scenario, RandomStream& rng)
{
    scenario.validate();
    const double length = scenario.street_length();
    const double y_a = scenario.sidewalk_offset_m;
    const double y_b = scenario.street_width_m - scenario.sidewalk_offset_m;
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(scenario.device_count));
    for (int i = 0; i < scenario.device_count; ++i)
    {
        const double y = rng.bernoulli(0.5) ? y_b : y_a;
        out.push_back({rng.uniform01() * length, y});
    }
    return out;
}

double distance(const Position& a, const Position& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace mmnc::deployment
