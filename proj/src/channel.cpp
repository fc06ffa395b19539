// SPDX-License-Identifier: Apache-2.0

#include "mmnc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mmnc::channel {

std::string_view to_string(LinkState s)
{
    switch (s)
    {
    case LinkState::outage:
        return "outage";
    case LinkState::los:
        return "los";
    case LinkState::nlos:
        return "nlos";
    }
    return "?";
}

std::string_view to_string(Modulation m)
{
    return m == Modulation::qpsk ? "qpsk" : "64qam";
}

std::string_view to_string(BerSnrScale s)
{
    return s == BerSnrScale::linear ? "linear" : "db";
}

void LinkBudget::validate() const
{
    if (block_length_bits < 1)
        throw std::invalid_argument("block length must be at least 1 bit");
    for (double v : {tx_power_dbm, beamforming_gain_db, coding_gain_db, noise_power_dbm, noise_figure_db})
        if (!std::isfinite(v))
            throw std::invalid_argument("link budget entries must be finite");
}

LinkBudget LinkBudget::downlink_default()
{
    return LinkBudget{30.0, 20.0, 6.0, -87.0, 5.0, Modulation::qam64, 10000};
}

LinkBudget LinkBudget::uplink_default()
{
    return LinkBudget{20.0, 0.0, 6.0, -87.0, 5.0, Modulation::qpsk, 10000};
}

void ChannelParams::validate() const
{
    if (!(erasure_threshold > 0.0 && erasure_threshold <= 1.0))
        throw std::invalid_argument("erasure threshold must lie in (0, 1]");
    if (!(states.outage_scale_m > 0.0) || !(states.los_scale_m > 0.0))
        throw std::invalid_argument("state probability length scales must be positive");
    if (!(min_distance_m > 0.0))
        throw std::invalid_argument("minimum path-loss distance must be positive");
    for (const auto* pl : {&los, &nlos})
        if (!std::isfinite(pl->intercept_db) || !std::isfinite(pl->exponent) || pl->shadowing_db < 0.0)
            throw std::invalid_argument("path-loss coefficients must be finite with non-negative shadowing");
    if (states.pinned)
    {
        const auto& p = *states.pinned;
        double sum = 0.0;
        for (double v : p)
        {
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("pinned state probabilities must lie in [0, 1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("pinned state probabilities must sum to 1");
    }
    if (fixed_erasure && !(*fixed_erasure >= 0.0 && *fixed_erasure <= 1.0))
        throw std::invalid_argument("fixed erasure must lie in [0, 1]");
}

StateProbabilities state_probabilities(double distance_m, const ChannelParams& params)
{
    if (params.states.pinned)
    {
        const auto& p = *params.states.pinned;
        return {p[0], p[1], p[2]};
    }
    const auto& c = params.states;
    const double d = std::max(distance_m, 0.0);
    const double outage = std::clamp(1.0 - std::exp(-d / c.outage_scale_m + c.outage_offset), 0.0, 1.0);
    const double los = (1.0 - outage) * std::exp(-d / c.los_scale_m);
    return {outage, los, std::max(0.0, 1.0 - outage - los)};
}

LinkState sample_link_state(double distance_m, const ChannelParams& params, RandomStream& rng)
{
    const auto probs = state_probabilities(distance_m, params);
    const double u = rng.uniform01();
    if (u < probs.outage)
        return LinkState::outage;
    if (u < probs.outage + probs.los)
        return LinkState::los;
    return LinkState::nlos;
}

double mean_pathloss_db(double distance_m, LinkState state, const ChannelParams& params)
{
    if (state == LinkState::outage)
        throw std::invalid_argument("path loss is undefined for a link in outage");
    const auto& c = state == LinkState::los ? params.los : params.nlos;
    const double d = std::max(distance_m, params.min_distance_m);
    return c.intercept_db + 10.0 * c.exponent * std::log10(d);
}

double snr_from_pathloss_db(double pathloss_db, const LinkBudget& budget)
{
    return budget.tx_power_dbm + budget.beamforming_gain_db + budget.coding_gain_db - pathloss_db -
           (budget.noise_power_dbm + budget.noise_figure_db);
}

double snr_db(double distance_m, LinkState state, const LinkBudget& budget, const ChannelParams& params,
              RandomStream& rng)
{
    double pl = mean_pathloss_db(distance_m, state, params);
    const double sigma = (state == LinkState::los ? params.los : params.nlos).shadowing_db;
    if (sigma > 0.0)
        pl += sigma * rng.normal();
    return snr_from_pathloss_db(pl, budget);
}

double bit_error_probability(double snr_db, Modulation modulation, BerSnrScale scale)
{
    const double snr = scale == BerSnrScale::linear ? std::pow(10.0, snr_db / 10.0) : std::max(0.0, snr_db);
    switch (modulation)
    {
    case Modulation::qam64:
        return 0.2917 * std::erfc(std::sqrt(9.0 * snr / 63.0));
    case Modulation::qpsk:
        return 0.5 * std::erfc(std::sqrt(snr));
    }
    return 1.0;
}

double block_erasure_probability(double bit_error, int block_length_bits)
{
    const double pb = std::clamp(bit_error, 0.0, 1.0);
    // 1 - (1 - pb)^L without cancellation for tiny pb.
    const double success_log = static_cast<double>(block_length_bits) * std::log1p(-pb);
    return std::clamp(-std::expm1(success_log), 0.0, 1.0);
}

double erasure_probability(double snr_db, const LinkBudget& budget, BerSnrScale scale)
{
    return block_erasure_probability(bit_error_probability(snr_db, budget.modulation, scale),
                                     budget.block_length_bits);
}

LinkEntry classify(LinkState state, double erasure, double threshold)
{
    if (state == LinkState::outage || erasure > threshold)
        return {LinkState::outage, 1.0};
    return {state, erasure};
}

LinkMatrix::LinkMatrix(std::size_t devices, std::size_t relays)
    : devices_(devices), relays_(relays), entries_(devices * relays)
{
}

std::vector<double> LinkMatrix::erasure_row(std::size_t device) const
{
    std::vector<double> out(relays_);
    for (std::size_t j = 0; j < relays_; ++j)
        out[j] = at(device, j).erasure;
    return out;
}

std::vector<double> LinkMatrix::usable_erasures(std::size_t device) const
{
    std::vector<double> out;
    for (std::size_t j = 0; j < relays_; ++j)
        if (at(device, j).usable())
            out.push_back(at(device, j).erasure);
    return out;
}

bool LinkMatrix::any_usable(std::size_t device) const
{
    for (std::size_t j = 0; j < relays_; ++j)
        if (at(device, j).usable())
            return true;
    return false;
}

LinkMatrix build_link_matrix(std::span<const deployment::Position> devices,
                             std::span<const deployment::Position> relays, const LinkBudget& budget,
                             const ChannelParams& params, RandomStream& rng)
{
    LinkMatrix m(devices.size(), relays.size());
    for (std::size_t i = 0; i < devices.size(); ++i)
    {
        for (std::size_t j = 0; j < relays.size(); ++j)
        {
            const double d = deployment::distance(devices[i], relays[j]);
            const auto state = sample_link_state(d, params, rng);
            if (state == LinkState::outage)
            {
                m.at(i, j) = {LinkState::outage, 1.0};
                continue;
            }
            const double erasure =
                params.fixed_erasure
                    ? *params.fixed_erasure
                    : erasure_probability(snr_db(d, state, budget, params, rng), budget, params.ber_snr_scale);
            m.at(i, j) = classify(state, erasure, params.erasure_threshold);
        }
    }
    return m;
}

LinkMatrices build_link_matrices(std::span<const deployment::Position> devices,
                                 std::span<const deployment::Position> relays, const LinkBudget& downlink,
                                 const LinkBudget& uplink, const ChannelParams& params, RandomStream& rng)
{
    auto dl = build_link_matrix(devices, relays, downlink, params, rng);
    auto ul = build_link_matrix(devices, relays, uplink, params, rng);
    return {std::move(dl), std::move(ul)};
}

} // namespace mmnc::channel
