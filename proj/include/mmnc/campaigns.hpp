// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mmnc/config.hpp"
#include "mmnc/csv.hpp"
#include "mmnc/gf.hpp"
#include "mmnc/random.hpp"
#include "mmnc/stats.hpp"

namespace mmnc::cli {

// Substream seeds, all derived from the base seed with derive_seed():
//   downlink  {1, c, r, 0} device drop, {1, c, r, 1, d} links and spans of device d
//   uplink    {2, c, r, 0} device drop, {2, c, r, 2, z} grouping,
//             {2, c, r, 3, z, g} links and spans of group g
// Links are redrawn every time-span.
//   bounds    {3, zi, pi, r} uplink simulation at code length index zi, erasure index pi
//   phi       {4, zi, qi, pi, r}
// where c indexes the inter-relay distance and r the replication.

struct NamedCsv
{
    std::string filename;
    CsvDocument document;
};

struct CampaignOutput
{
    std::vector<NamedCsv> files;

    /// Writes every file under `dir`, creating it if needed.
    void write(const std::filesystem::path& dir) const;
};

/// `#` metadata shared by every file: tool, seed, config hash, field.
void stamp(CsvDocument& doc, const std::string& command, const ExperimentConfig& config);

// ---- bounds ---------------------------------------------------------------

struct SymmetricUplinkEstimate
{
    stats::Estimate forwarding;
    stats::Estimate nc;
    std::uint64_t spans = 0;
};

/// z devices, N relays, every uplink erasure equal to p; `spans` independent
/// time-spans. Efficiencies are ratio estimates (sum of z over sum of backhaul
/// transmissions) with delta-method standard errors.
SymmetricUplinkEstimate simulate_symmetric_uplink(const gf::Field& field, int z, int relays, double p,
                                                  std::uint64_t spans, RandomStream& rng);

struct BoundsResult
{
    CampaignOutput output;
    /// Number of (z, p) cells where the coded bound is undefined.
    std::size_t undefined_cells = 0;
};

/// downlink_bounds.csv and uplink_bounds.csv.
BoundsResult run_bounds_figures(const ExperimentConfig& config);

// ---- downlink -------------------------------------------------------------

struct DownlinkSummary
{
    double inter_relay_distance_m = 0.0;
    std::size_t devices = 0;
    std::size_t outage_devices = 0; // every span in outage
    std::uint64_t outage_spans = 0;
    double median_eff_forwarding = 0.0;
    double median_eff_nc = 0.0;
    double median_gain = 0.0; // median(NC) / median(F) - 1
    double median_slots_forwarding = 0.0;
    double median_slots_nc = 0.0;
};

struct DownlinkResult
{
    CampaignOutput output;
    std::vector<DownlinkSummary> summaries; // one per inter-relay distance
};

/// downlink_devices.csv, downlink_cdf.csv and downlink_summary.csv.
DownlinkResult run_downlink_campaign(const ExperimentConfig& config);

// ---- uplink ---------------------------------------------------------------

/// Partitions devices into groups of z. Leftover devices (fewer than z) are dropped.
///   proximity: a uniformly chosen unassigned anchor plus its z - 1 nearest
///              unassigned devices (ties by index)
///   random:    shuffle, then consecutive chunks
std::vector<std::vector<std::size_t>> group_devices(const std::vector<deployment::Position>& devices, int z,
                                                    Grouping policy, RandomStream& rng);

struct UplinkSummary
{
    double inter_relay_distance_m = 0.0;
    int z = 0;
    std::size_t groups = 0;
    std::size_t outage_groups = 0;
    double median_bkeff_forwarding = 0.0;
    double median_bkeff_nc = 0.0;
    double median_gain = 0.0;
};

struct UplinkResult
{
    CampaignOutput output;
    std::vector<UplinkSummary> summaries; // distance-major, then code length
};

/// uplink_groups.csv, uplink_cdf.csv and uplink_summary.csv.
UplinkResult run_uplink_campaign(const ExperimentConfig& config);

// ---- phi ------------------------------------------------------------------

struct PhiRow
{
    int z = 0;
    std::uint32_t q = 0;
    double p = 0.0;
    std::uint64_t trials = 0;
    double phi_hat = 0.0;
    double standard_error = 0.0;
    double phi_ub = 0.0;
    bool feasible = false;
    bool within_bound = false; // phi_hat <= phi_ub + 3 SE
};

struct PhiResult
{
    CampaignOutput output;
    std::vector<PhiRow> rows;
};

/// phi_validation.csv
PhiResult run_phi_validation(const ExperimentConfig& config);

} // namespace mmnc::cli
