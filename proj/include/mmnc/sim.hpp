// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mmnc/gf.hpp"
#include "mmnc/random.hpp"
#include "mmnc/rlnc.hpp"

namespace mmnc::sim {

/// Counters for one time-span (or a sum over several).
struct RunMetrics
{
    std::uint64_t air_transmissions = 0;
    std::uint64_t backhaul_transmissions = 0;
    std::uint64_t slots_to_complete = 0;
    std::uint64_t packets_delivered = 0;

    /// packets delivered per air transmission
    double efficiency() const noexcept;
    /// packets delivered per backhaul transmission
    double backhaul_efficiency() const noexcept;

    RunMetrics& operator+=(const RunMetrics& other) noexcept;
};

/// Downlink Forwarding over the relays with erasure probabilities `links`.
///
/// Each of the k packets goes to a relay chosen uniformly among the usable
/// ones (erasure < 1) and is retransmitted until received. One transmission
/// occupies one slot. Returns std::nullopt when no link is usable (outage span).
std::optional<RunMetrics> downlink_forwarding(int k, std::span<const double> links, RandomStream& rng);

/// Downlink intra-session coding: until the device decodes, draw a fresh coded
/// packet, pick a usable relay uniformly and transmit once.
std::optional<RunMetrics> downlink_nc(const gf::Field& field, int k, std::span<const double> links,
                                      RandomStream& rng);

/// held[relay][device]: relay holds that device's packet.
using ReceptionMasks = std::vector<std::vector<bool>>;

struct DevicePhase
{
    ReceptionMasks held;
    /// excluded[i]: device i has no usable uplink and did not transmit.
    std::vector<bool> excluded;
    std::uint64_t air_transmissions = 0;

    std::size_t active_devices() const;
    /// Masks with the columns of excluded devices removed.
    ReceptionMasks active_masks() const;
};

/// Every device with a usable link broadcasts its packet until at least one
/// relay receives it; only the final attempt delivers anything.
/// `erasure[i][j]` is the device-i to relay-j erasure probability (1 = unusable).
DevicePhase uplink_device_phase(const std::vector<std::vector<double>>& erasure, RandomStream& rng);

/// Each relay forwards every packet it holds; copies are not deduplicated.
std::uint64_t uplink_forwarding_backhaul(const ReceptionMasks& held);

struct UplinkDecode
{
    std::uint64_t backhaul_transmissions = 0;
    std::vector<rlnc::Payload> decoded;
};

/// Uplink inter-session coding at the relays.
///
/// Relays take turns in rounds, ordered by held-packet count (descending,
/// ties by index). A relay sends a fresh coded packet of what it holds unless
/// every one of its packets is already in the network's row space; sending
/// stops once the network can decode. Returns std::nullopt when some packet
/// is held by no relay (undecodable span).
std::optional<std::uint64_t> uplink_nc_backhaul(const gf::Field& field, const ReceptionMasks& held,
                                                RandomStream& rng);

/// Same schedule carrying real payloads (`payloads[i]` is device i's packet);
/// also returns what the network decoded.
std::optional<UplinkDecode> uplink_nc_backhaul(const gf::Field& field, const ReceptionMasks& held,
                                               std::span<const rlnc::Payload> payloads, RandomStream& rng);

/// Outcome of one uplink time-span for a group of devices.
struct UplinkSpan
{
    std::size_t active_devices = 0;
    std::size_t excluded_devices = 0;
    std::uint64_t air_transmissions = 0;
    std::uint64_t forwarding_backhaul = 0;
    std::uint64_t nc_backhaul = 0;
};

/// Device phase followed by both backhaul schemes on the same receptions.
/// Returns std::nullopt if no device could transmit.
std::optional<UplinkSpan> run_uplink_span(const gf::Field& field, const std::vector<std::vector<double>>& erasure,
                                          RandomStream& rng);

} // namespace mmnc::sim
