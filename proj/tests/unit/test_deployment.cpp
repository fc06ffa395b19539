// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmnc/deployment.hpp"

using namespace mmnc::deployment;
using mmnc::RandomStream;

TEST_CASE("relays are staggered across the street")
{
    StreetScenario s;
    s.relay_count = 10;
    s.inter_relay_distance_m = 30.0;
    const auto r = place_relays(s);
    REQUIRE(r.size() == 10);
    for (int i = 0; i < 5; ++i)
    {
        CHECK(r[static_cast<std::size_t>(i)] == Position{30.0 * i, 0.0});
        CHECK(r[static_cast<std::size_t>(5 + i)] == Position{30.0 * i + 15.0, 20.0});
    }
    CHECK(s.street_length() == doctest::Approx(135.0));
}

TEST_CASE("odd and single relay counts")
{
    StreetScenario s;
    s.relay_count = 3;
    s.inter_relay_distance_m = 60.0;
    CHECK(s.side_a_relays() == 2);
    CHECK(s.side_b_relays() == 1);
    CHECK(s.street_length() == doctest::Approx(60.0));
    s.relay_count = 1;
    CHECK(place_relays(s).size() == 1);
    CHECK(s.street_length() == doctest::Approx(30.0));
}

TEST_CASE("validation")
{
    StreetScenario s;
    s.relay_count = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.relay_count = 2;
    s.inter_relay_distance_m = -1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("distance is Euclidean")
{
    CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
    CHECK(distance({1, 1}, {1, 1}) == 0.0);
}

TEST_CASE("devices sit on the sidewalks with uniform x (Kolmogorov-Smirnov)")
{
    StreetScenario s;
    s.inter_relay_distance_m = 80.0;
    s.device_count = 20000;
    RandomStream rng(12);
    const auto devs = drop_devices(s, rng);
    REQUIRE(devs.size() == 20000);
    const double length = s.street_length();
    std::vector<double> xs;
    int side_a = 0;
    for (const auto& d : devs)
    {
        REQUIRE((d.y == 2.0 || d.y == 18.0));
        REQUIRE(d.x >= 0.0);
        REQUIRE(d.x <= length);
        side_a += d.y == 2.0 ? 1 : 0;
        xs.push_back(d.x / length);
    }
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    const auto n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        ks = std::max({ks, (i + 1) / n - xs[i], xs[i] - i / n});
    CHECK(ks < 1.63 / std::sqrt(n)); // 1% critical value
    CHECK(std::abs(side_a - 10000) < 5.0 * std::sqrt(5000.0));
}

TEST_CASE("same seed, same drop")
{
    StreetScenario s;
    s.device_count = 50;
    RandomStream a(7), b(7);
    CHECK(drop_devices(s, a) == drop_devices(s, b));
}
