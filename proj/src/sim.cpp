// SPDX-License-Identifier: Apache-2.0

#include "mmnc/sim.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mmnc::sim {

double RunMetrics::efficiency() const noexcept
{
    return air_transmissions == 0 ? 0.0
                                  : static_cast<double>(packets_delivered) / static_cast<double>(air_transmissions);
}

double RunMetrics::backhaul_efficiency() const noexcept
{
    return backhaul_transmissions == 0
               ? 0.0
               : static_cast<double>(packets_delivered) / static_cast<double>(backhaul_transmissions);
}

RunMetrics& RunMetrics::operator+=(const RunMetrics& other) noexcept
{
    air_transmissions += other.air_transmissions;
    backhaul_transmissions += other.backhaul_transmissions;
    slots_to_complete += other.slots_to_complete;
    packets_delivered += other.packets_delivered;
    return *this;
}

namespace {

std::vector<double> usable_links(std::span<const double> links)
{
    std::vector<double> out;
    out.reserve(links.size());
    for (double p : links)
    {
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("erasure probabilities must lie in [0, 1]");
        if (p < 1.0)
            out.push_back(p);
    }
    return out;
}

void check_packets(int k)
{
    if (k < 1)
        throw std::invalid_argument("packets per time-span must be at least 1");
}

} // namespace

std::optional<RunMetrics> downlink_forwarding(int k, std::span<const double> links, RandomStream& rng)
{
    check_packets(k);
    const auto usable = usable_links(links);
    if (usable.empty())
        return std::nullopt;

    RunMetrics m;
    for (int packet = 0; packet < k; ++packet)
    {
        const double p = usable[rng.uniform_index(usable.size())];
        do
            ++m.air_transmissions;
        while (rng.bernoulli(p));
    }
    m.slots_to_complete = m.air_transmissions;
    m.packets_delivered = static_cast<std::uint64_t>(k);
    return m;
}

std::optional<RunMetrics> downlink_nc(const gf::Field& field, int k, std::span<const double> links,
                                      RandomStream& rng)
{
    check_packets(k);
    const auto usable = usable_links(links);
    if (usable.empty())
        return std::nullopt;

    const auto gen = rlnc::Generation::coefficients_only(static_cast<std::size_t>(k));
    rlnc::Decoder decoder(field, gen.size());
    RunMetrics m;
    while (!decoder.complete())
    {
        const auto pkt = rlnc::encode_intra(field, gen, rng);
        const double p = usable[rng.uniform_index(usable.size())];
        ++m.air_transmissions;
        if (!rng.bernoulli(p))
            decoder.add(pkt);
    }
    m.slots_to_complete = m.air_transmissions;
    m.packets_delivered = static_cast<std::uint64_t>(k);
    return m;
}

std::size_t DevicePhase::active_devices() const
{
    return static_cast<std::size_t>(std::count(excluded.begin(), excluded.end(), false));
}

ReceptionMasks DevicePhase::active_masks() const
{
    ReceptionMasks out;
    out.reserve(held.size());
    for (const auto& mask : held)
    {
        std::vector<bool> row;
        row.reserve(active_devices());
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (!excluded[i])
                row.push_back(mask[i]);
        out.push_back(std::move(row));
    }
    return out;
}

DevicePhase uplink_device_phase(const std::vector<std::vector<double>>& erasure, RandomStream& rng)
{
    const std::size_t devices = erasure.size();
    const std::size_t relays = devices == 0 ? 0 : erasure.front().size();
    for (const auto& row : erasure)
        if (row.size() != relays)
            throw std::invalid_argument("erasure matrix rows must have equal length");

    DevicePhase out;
    out.held.assign(relays, std::vector<bool>(devices, false));
    out.excluded.assign(devices, false);
    std::vector<bool> got(relays);
    for (std::size_t i = 0; i < devices; ++i)
    {
        const auto& row = erasure[i];
        if (std::none_of(row.begin(), row.end(), [](double p) { return p < 1.0; }))
        {
            out.excluded[i] = true;
            continue;
        }
        bool any = false;
        while (!any)
        {
            ++out.air_transmissions;
            for (std::size_t j = 0; j < relays; ++j)
            {
                got[j] = row[j] < 1.0 && !rng.bernoulli(row[j]);
                any = any || got[j];
            }
        }
        for (std::size_t j = 0; j < relays; ++j)
            if (got[j])
                out.held[j][i] = true;
    }
    return out;
}

std::uint64_t uplink_forwarding_backhaul(const ReceptionMasks& held)
{
    std::uint64_t count = 0;
    for (const auto& mask : held)
        count += static_cast<std::uint64_t>(std::count(mask.begin(), mask.end(), true));
    return count;
}

namespace {

std::optional<UplinkDecode> schedule_nc(const gf::Field& field, const ReceptionMasks& held,
                                        std::span<const rlnc::Payload> payloads, bool keep_payloads,
                                        RandomStream& rng)
{
    if (held.empty())
        return std::nullopt;
    const std::size_t z = held.front().size();
    if (z == 0)
        return std::nullopt;
    for (const auto& mask : held)
        if (mask.size() != z)
            throw std::invalid_argument("reception masks must have equal length");
    if (payloads.size() != z)
        throw std::invalid_argument("one payload slot per source is required");

    for (std::size_t i = 0; i < z; ++i)
        if (std::none_of(held.begin(), held.end(), [i](const auto& mask) { return mask[i]; }))
            return std::nullopt;

    std::vector<std::size_t> counts(held.size());
    for (std::size_t r = 0; r < held.size(); ++r)
        counts[r] = static_cast<std::size_t>(std::count(held[r].begin(), held[r].end(), true));
    std::vector<std::size_t> order(held.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

    const std::size_t length = payloads.front().size();
    rlnc::Decoder network(field, z, length);
    UplinkDecode out;
    while (!network.complete())
    {
        bool sent = false;
        for (std::size_t r : order)
        {
            if (network.complete())
                break;
            if (counts[r] == 0 || network.covers(held[r]))
                continue;
            auto pkt = rlnc::encode_inter(field, held[r], payloads, rng);
            ++out.backhaul_transmissions;
            network.add(*pkt);
            sent = true;
        }
        // Coverage was checked up front, so some relay always has something new.
        if (!sent)
            throw std::logic_error("uplink coding schedule stalled below full rank");
    }
    if (keep_payloads)
        out.decoded = network.extract();
    return out;
}

} // namespace

std::optional<std::uint64_t> uplink_nc_backhaul(const gf::Field& field, const ReceptionMasks& held,
                                                RandomStream& rng)
{
    const std::size_t z = held.empty() ? 0 : held.front().size();
    const std::vector<rlnc::Payload> empty(z);
    auto r = schedule_nc(field, held, empty, false, rng);
    if (!r)
        return std::nullopt;
    return r->backhaul_transmissions;
}

std::optional<UplinkDecode> uplink_nc_backhaul(const gf::Field& field, const ReceptionMasks& held,
                                               std::span<const rlnc::Payload> payloads, RandomStream& rng)
{
    return schedule_nc(field, held, payloads, true, rng);
}

std::optional<UplinkSpan> run_uplink_span(const gf::Field& field, const std::vector<std::vector<double>>& erasure,
                                          RandomStream& rng)
{
    const auto phase = uplink_device_phase(erasure, rng);
    UplinkSpan span;
    span.active_devices = phase.active_devices();
    span.excluded_devices = erasure.size() - span.active_devices;
    if (span.active_devices == 0)
        return std::nullopt;
    span.air_transmissions = phase.air_transmissions;
    span.forwarding_backhaul = uplink_forwarding_backhaul(phase.held);
    const auto nc = uplink_nc_backhaul(field, phase.active_masks(), rng);
    if (!nc)
        throw std::logic_error("device phase left an active packet unheld");
    span.nc_backhaul = *nc;
    return span;
}

} // namespace mmnc::sim
