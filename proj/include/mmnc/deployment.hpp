// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "mmnc/random.hpp"

namespace mmnc::deployment {

struct Position
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

/// Street canyon with relays staggered on both sides and devices on the sidewalks.
struct StreetScenario
{
    int relay_count = 10;
    double inter_relay_distance_m = 30.0;
    double street_width_m = 20.0;
    double sidewalk_offset_m = 2.0;
    int device_count = 0;

    /// Throws std::invalid_argument on a non-positive relay count, spacing or width.
    void validate() const;

    /// Relays on side A (y = 0), the rest on side B (y = width).
    int side_a_relays() const noexcept { return (relay_count + 1) / 2; }
    int side_b_relays() const noexcept { return relay_count / 2; }

    /// x-extent of the relay grid; devices are dropped over [0, street_length()].
    /// A lone relay still yields a street of half a spacing.
    double street_length() const;
};

/// Side A at x = 0, D, 2D, ...; side B at x = D/2, 3D/2, ...
std::vector<Position> place_relays(const StreetScenario& scenario);

/// Each device picks a sidewalk uniformly and x uniformly along the street.
std::vector<Position> drop_devices(const StreetScenario& scenario, RandomStream& rng);

double distance(const Position& a, const Position& b);

} // namespace mmnc::deployment
