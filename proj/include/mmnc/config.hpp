// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmnc/channel.hpp"
#include "mmnc/deployment.hpp"
#include "mmnc/gf.hpp"

namespace mmnc::cli {

/// Malformed or out-of-range experiment configuration (exit code 2).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Grouping
{
    proximity,
    random,
};

struct FieldConfig
{
    std::uint32_t q = 1024;
    std::optional<std::uint32_t> polynomial;
};

/// Throws std::invalid_argument for an unsupported size or polynomial.
gf::Field make_field(const FieldConfig& config);

struct ScenarioConfig
{
    int relay_count = 10;
    std::vector<double> inter_relay_distances_m{30.0, 60.0, 80.0};
    double street_width_m = 20.0;
    double sidewalk_offset_m = 2.0;
    int device_count = 5000;

    deployment::StreetScenario street(double inter_relay_distance_m) const;
};

struct TimeSpanConfig
{
    int packets_per_span = 8;
    std::vector<int> code_lengths{4, 8};
    int spans_per_device = 200;
};

struct BoundsConfig
{
    int max_relays = 10;
    std::vector<std::pair<double, double>> erasure_pairs{{0.1, 0.6}, {0.1, 0.9}};
    std::vector<int> code_lengths{4, 12};
    std::uint32_t field_size = 1024;
    int uplink_relays = 4;
    std::vector<double> erasures; // filled by default_config()
    bool simulate = true;
    int simulation_spans = 2000;
    double series_tolerance = 1e-12;
    std::size_t max_terms = 1'000'000;
};

struct PhiConfig
{
    std::vector<int> code_lengths{2, 4};
    std::vector<std::uint32_t> field_sizes{2, 16, 1024};
    std::vector<double> erasures;
    std::uint64_t trials = 100000;
};

struct ExperimentConfig
{
    FieldConfig field;
    ScenarioConfig scenario;
    channel::ChannelParams channel;
    channel::LinkBudget downlink_budget = channel::LinkBudget::downlink_default();
    channel::LinkBudget uplink_budget = channel::LinkBudget::uplink_default();
    TimeSpanConfig timespan;
    Grouping uplink_grouping = Grouping::proximity;
    BoundsConfig bounds;
    PhiConfig phi;
    int replications = 1;
    std::uint64_t seed = 1;
    std::string output_dir = "results";
    unsigned threads = 0;
    bool emit_spans = false;

    /// Throws ConfigError describing the first invalid field.
    void validate() const;
};

/// Reference street-canyon deployment, 28 GHz channel and campaign sizes.
ExperimentConfig default_config();

nlohmann::json to_json(const ExperimentConfig& config);

/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

} // namespace mmnc::cli
