// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "mmnc/deployment.hpp"
#include "mmnc/random.hpp"

namespace mmnc::channel {

enum class Modulation
{
    qpsk,
    qam64,
};

/// How the SNR enters the erfc bit-error expressions.
///   linear: 10^(dB/10), the textbook reading
///   db:     the dB value itself (clamped at 0); matches the reference
///           downlink gain magnitudes, see README
enum class BerSnrScale
{
    linear,
    db,
};

enum class LinkState
{
    outage,
    los,
    nlos,
};

std::string_view to_string(LinkState s);
std::string_view to_string(Modulation m);
std::string_view to_string(BerSnrScale s);

/// Transmit-side and receiver-side budget of one link direction, all in dB/dBm.
struct LinkBudget
{
    double tx_power_dbm = 30.0;
    double beamforming_gain_db = 20.0;
    double coding_gain_db = 6.0;
    double noise_power_dbm = -87.0;
    double noise_figure_db = 5.0;
    Modulation modulation = Modulation::qam64;
    int block_length_bits = 10000;

    /// Throws std::invalid_argument on a non-positive block length or non-finite entries.
    void validate() const;

    static LinkBudget downlink_default();
    static LinkBudget uplink_default();
};

/// PL(d) [dB] = intercept + 10 * exponent * log10(d) + N(0, shadowing^2)
struct PathLossCoefficients
{
    double intercept_db = 0.0;
    double exponent = 2.0;
    double shadowing_db = 0.0;
};

/// Distance-dependent outage/LOS/NLOS probabilities:
///   p_out(d) = max(0, 1 - exp(-d / outage_scale_m + outage_offset))
///   p_los(d) = (1 - p_out(d)) * exp(-d / los_scale_m)
///   p_nlos(d) = 1 - p_out(d) - p_los(d)
/// When `pinned` is set it is used verbatim at every distance (outage, los, nlos).
struct StateProbabilityCoefficients
{
    double outage_scale_m = 30.0;
    double outage_offset = 5.2;
    double los_scale_m = 67.1;
    std::optional<std::array<double, 3>> pinned;
};

struct StateProbabilities
{
    double outage = 0.0;
    double los = 0.0;
    double nlos = 0.0;
};

struct ChannelParams
{
    PathLossCoefficients los{61.4, 2.0, 5.8};
    PathLossCoefficients nlos{72.0, 2.92, 8.7};
    StateProbabilityCoefficients states{};
    double carrier_ghz = 28.0;
    double erasure_threshold = 0.9;
    /// Path loss is evaluated at max(d, min_distance_m).
    double min_distance_m = 1.0;
    BerSnrScale ber_snr_scale = BerSnrScale::linear;
    /// Replaces the SNR/BLER chain for non-outage links when set.
    std::optional<double> fixed_erasure;

    /// Throws std::invalid_argument if the threshold is outside (0, 1], a pinned
    /// distribution is invalid, or scales are non-positive.
    void validate() const;
};

StateProbabilities state_probabilities(double distance_m, const ChannelParams& params);

LinkState sample_link_state(double distance_m, const ChannelParams& params, RandomStream& rng);

/// Mean path loss in dB (no shadowing). Throws std::invalid_argument for outage.
double mean_pathloss_db(double distance_m, LinkState state, const ChannelParams& params);

/// tx + beamforming + coding - pathloss - (noise + noise figure)
double snr_from_pathloss_db(double pathloss_db, const LinkBudget& budget);

/// SNR in dB with shadowing drawn from `rng` when configured.
/// Throws std::invalid_argument for the outage state.
double snr_db(double distance_m, LinkState state, const LinkBudget& budget, const ChannelParams& params,
              RandomStream& rng);

/// Bit error probability:
///   64QAM: 0.2917 erfc(sqrt(9 snr / 63)),  QPSK: 0.5 erfc(sqrt(snr)),
/// with snr taken according to `scale`.
double bit_error_probability(double snr_db, Modulation modulation, BerSnrScale scale = BerSnrScale::linear);

/// 1 - (1 - p_b)^L, clamped to [0, 1].
double block_erasure_probability(double bit_error, int block_length_bits);

double erasure_probability(double snr_db, const LinkBudget& budget, BerSnrScale scale = BerSnrScale::linear);

struct LinkEntry
{
    LinkState state = LinkState::outage;
    double erasure = 1.0;

    bool usable() const noexcept { return state != LinkState::outage; }
};

/// Applies the outage rule: erasure above `threshold` turns the link into outage.
LinkEntry classify(LinkState state, double erasure, double threshold);

/// Erasure probabilities p_{i,j} for devices i and relays j in one direction.
class LinkMatrix
{
  public:
    LinkMatrix(std::size_t devices, std::size_t relays);

    std::size_t devices() const noexcept { return devices_; }
    std::size_t relays() const noexcept { return relays_; }

    LinkEntry& at(std::size_t device, std::size_t relay) { return entries_.at(device * relays_ + relay); }
    const LinkEntry& at(std::size_t device, std::size_t relay) const { return entries_.at(device * relays_ + relay); }

    /// Row of erasure probabilities for one device (outage links carry 1).
    std::vector<double> erasure_row(std::size_t device) const;

    /// Erasure probabilities of a device's usable relays, in relay order.
    std::vector<double> usable_erasures(std::size_t device) const;

    bool any_usable(std::size_t device) const;

  private:
    std::size_t devices_;
    std::size_t relays_;
    std::vector<LinkEntry> entries_;
};

/// Samples state and erasure for every (device, relay) pair.
LinkMatrix build_link_matrix(std::span<const deployment::Position> devices,
                             std::span<const deployment::Position> relays, const LinkBudget& budget,
                             const ChannelParams& params, RandomStream& rng);

struct LinkMatrices
{
    LinkMatrix downlink;
    LinkMatrix uplink;
};

/// Both directions; each is sampled independently.
LinkMatrices build_link_matrices(std::span<const deployment::Position> devices,
                                 std::span<const deployment::Position> relays, const LinkBudget& downlink,
                                 const LinkBudget& uplink, const ChannelParams& params, RandomStream& rng);

} // namespace mmnc::channel
