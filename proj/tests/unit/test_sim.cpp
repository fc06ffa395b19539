// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmnc/bounds.hpp"
#include "mmnc/sim.hpp"
#include "mmnc/stats.hpp"

using namespace mmnc::sim;
using mmnc::RandomStream;
using mmnc::gf::Field;

namespace {

struct Sample
{
    std::vector<double> delivered, air;
};

template <typename Run>
Sample collect(int spans, Run&& run)
{
    Sample s;
    for (int i = 0; i < spans; ++i)
    {
        const auto m = run();
        REQUIRE(m.has_value());
        s.delivered.push_back(static_cast<double>(m->packets_delivered));
        s.air.push_back(static_cast<double>(m->air_transmissions));
    }
    return s;
}

} // namespace

TEST_CASE("metrics arithmetic")
{
    RunMetrics a{10, 4, 10, 8};
    CHECK(a.efficiency() == doctest::Approx(0.8));
    CHECK(a.backhaul_efficiency() == doctest::Approx(2.0));
    a += RunMetrics{10, 4, 10, 2};
    CHECK(a.efficiency() == doctest::Approx(0.5));
    CHECK(RunMetrics{}.efficiency() == 0.0);
}

TEST_CASE("downlink: error-free links need exactly k transmissions")
{
    RandomStream rng(1);
    const Field f(1024);
    const std::vector<double> links{0.0, 0.0, 0.0};
    for (int i = 0; i < 200; ++i)
    {
        const auto fw = downlink_forwarding(8, links, rng);
        REQUIRE(fw->air_transmissions == 8);
        REQUIRE(fw->slots_to_complete == 8);
        REQUIRE(fw->efficiency() == 1.0);
    }
    std::uint64_t total = 0;
    const int spans = 2000;
    for (int i = 0; i < spans; ++i)
    {
        const auto nc = downlink_nc(f, 8, links, rng);
        REQUIRE(nc->air_transmissions >= 8);
        total += nc->air_transmissions;
    }
    CHECK(static_cast<double>(total) / spans <= 8.0 * (1.0 + 2.0 / 1024.0));
}

TEST_CASE("downlink: no usable link is an outage span")
{
    RandomStream rng(2);
    const Field f(16);
    const std::vector<double> dead{1.0, 1.0};
    CHECK_FALSE(downlink_forwarding(4, dead, rng).has_value());
    CHECK_FALSE(downlink_nc(f, 4, dead, rng).has_value());
    CHECK_FALSE(downlink_forwarding(4, std::vector<double>{}, rng).has_value());
    CHECK_THROWS_AS(downlink_forwarding(0, dead, rng), std::invalid_argument);
}

TEST_CASE("downlink forwarding: geometric mean 1/(1-p) on a single relay")
{
    RandomStream rng(3);
    const std::vector<double> links{0.5};
    const auto s = collect(10000, [&] { return downlink_forwarding(1, links, rng); });
    const auto m = mmnc::stats::mean(s.air);
    CHECK(std::abs(m.value - 2.0) < 3.0 * m.standard_error);
}

TEST_CASE("downlink forwarding: N = 2, p = (0.1, 0.1), k = 4 gives 0.9")
{
    RandomStream rng(4);
    const std::vector<double> links{0.1, 0.1};
    const auto s = collect(10000, [&] { return downlink_forwarding(4, links, rng); });
    const auto r = mmnc::stats::ratio(s.delivered, s.air);
    CHECK(std::abs(r.value - 0.9) < 3.0 * r.standard_error);
}

TEST_CASE("downlink forwarding with N not dividing k follows the k-free harmonic mean, at or above the whole-round formula")
{
    RandomStream rng(5);
    const std::vector<double> links{0.1, 0.6};
    const mmnc::bounds::DownlinkScenario sc{3, links};
    const auto s = collect(20000, [&] { return downlink_forwarding(3, links, rng); });
    const auto r = mmnc::stats::ratio(s.delivered, s.air);
    CHECK(std::abs(r.value - mmnc::bounds::eff_forwarding_ub(links)) < 3.0 * r.standard_error);
    CHECK(r.value > mmnc::bounds::eff_forwarding(sc));
}

TEST_CASE("downlink NC: k = 1 reduces to 1 - mean erasure; symmetric links beat forwarding")
{
    RandomStream rng(6);
    const Field f(1024);
    const std::vector<double> links{0.2, 0.6};
    const auto s = collect(20000, [&] { return downlink_nc(f, 1, links, rng); });
    const auto r = mmnc::stats::ratio(s.delivered, s.air);
    CHECK(std::abs(r.value - 0.6) < 3.0 * r.standard_error);

    for (double p : {0.1, 0.4, 0.8})
    {
        const std::vector<double> sym(4, p);
        const auto fw = collect(5000, [&] { return downlink_forwarding(8, sym, rng); });
        const auto nc = collect(5000, [&] { return downlink_nc(f, 8, sym, rng); });
        const auto ef = mmnc::stats::ratio(fw.delivered, fw.air);
        const auto ec = mmnc::stats::ratio(nc.delivered, nc.air);
        CHECK(ec.value >= ef.value - 2.0 * std::hypot(ef.standard_error, ec.standard_error));
    }
}

TEST_CASE("uplink device phase: error-free links, 4/3 attempts, geometric single relay")
{
    RandomStream rng(7);
    const auto perfect = uplink_device_phase({{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}, rng);
    CHECK(perfect.air_transmissions == 2);
    for (const auto& relay : perfect.held)
        CHECK(relay == std::vector<bool>{true, true});

    std::vector<double> attempts;
    for (int i = 0; i < 20000; ++i)
        attempts.push_back(static_cast<double>(uplink_device_phase({{0.5, 0.5}}, rng).air_transmissions));
    auto m = mmnc::stats::mean(attempts);
    CHECK(std::abs(m.value - 4.0 / 3.0) < 3.0 * m.standard_error);

    attempts.clear();
    for (int i = 0; i < 20000; ++i)
        attempts.push_back(static_cast<double>(uplink_device_phase({{0.89}}, rng).air_transmissions));
    m = mmnc::stats::mean(attempts);
    CHECK(std::abs(m.value - 1.0 / 0.11) < 3.0 * m.standard_error);
}

TEST_CASE("uplink device phase: a device without usable links is excluded")
{
    RandomStream rng(8);
    const auto phase = uplink_device_phase({{1.0, 1.0}, {0.0, 1.0}}, rng);
    CHECK(phase.excluded == std::vector<bool>{true, false});
    CHECK(phase.active_devices() == 1);
    CHECK(phase.air_transmissions == 1);
    const auto masks = phase.active_masks();
    REQUIRE(masks.size() == 2);
    CHECK(masks[0] == std::vector<bool>{true});
    CHECK(masks[1] == std::vector<bool>{false});
}

TEST_CASE("uplink forwarding counts every held copy")
{
    CHECK(uplink_forwarding_backhaul({{true, true, true}, {true, true, true}}) == 6);
    CHECK(uplink_forwarding_backhaul({{true, false, false}, {false, true, false}, {false, false, true}}) == 3);
    CHECK(uplink_forwarding_backhaul({{false, false}, {false, false}}) == 0);
}

TEST_CASE("uplink NC backhaul examples")
{
    RandomStream rng(9);
    const Field f(1024);
    // one relay holds all four
    CHECK(uplink_nc_backhaul(f, {{true, true, true, true}, {false, false, false, false}}, rng) == 4U);
    // each packet at a distinct relay
    CHECK(uplink_nc_backhaul(f,
                             {{true, false, false, false},
                              {false, true, false, false},
                              {false, false, true, false},
                              {false, false, false, true}},
                             rng) == 4U);
    // every relay holds everything: still z, not z * N
    CHECK(uplink_nc_backhaul(f, ReceptionMasks(5, std::vector<bool>(4, true)), rng) == 4U);
    // coverage failure
    CHECK_FALSE(uplink_nc_backhaul(f, {{true, false}, {true, false}}, rng).has_value());
    // z = 1: NC sends one, forwarding one per holding relay
    CHECK(uplink_nc_backhaul(f, {{true}, {true}, {true}}, rng) == 1U);
    CHECK(uplink_forwarding_backhaul({{true}, {true}, {true}}) == 3);
}

TEST_CASE("uplink NC skips the redundant [c, 0, 0, 0] vector and still decodes")
{
    RandomStream rng(10);
    const Field f(1024);
    std::vector<mmnc::rlnc::Payload> payloads;
    for (int i = 0; i < 4; ++i)
    {
        mmnc::rlnc::Payload p(6);
        for (auto& s : p)
            s = f.sample_uniform(rng);
        payloads.push_back(p);
    }
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto out = uplink_nc_backhaul(f, {{true, false, false, false}, {true, true, true, true}}, payloads, rng);
        REQUIRE(out.has_value());
        REQUIRE(out->backhaul_transmissions == 4);
        REQUIRE(out->decoded == payloads);
    }
}

TEST_CASE("uplink span: symmetric p = 0 gives z N forwarding copies and z coded packets")
{
    RandomStream rng(11);
    const Field f(1024);
    const std::vector<std::vector<double>> zero(4, std::vector<double>(3, 0.0));
    const auto span = run_uplink_span(f, zero, rng);
    REQUIRE(span.has_value());
    CHECK(span->active_devices == 4);
    CHECK(span->forwarding_backhaul == 12);
    CHECK(span->nc_backhaul == 4);
    CHECK(span->air_transmissions == 4);

    const std::vector<std::vector<double>> dead(2, std::vector<double>(3, 1.0));
    CHECK_FALSE(run_uplink_span(f, dead, rng).has_value());
}
