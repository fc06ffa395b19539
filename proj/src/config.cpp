// SPDX-License-Identifier: Apache-2.0

#include "mmnc/config.hpp"

#include "mmnc/gf.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mmnc::cli {

using nlohmann::json;

namespace {

std::vector<double> grid(double start, double stop, double step)
{
    std::vector<double> out;
    const auto n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= n; ++i)
        out.push_back(std::round((start + i * step) * 1e12) / 1e12);
    return out;
}

json budget_json(const channel::LinkBudget& b)
{
    return {{"tx_power_dbm", b.tx_power_dbm},
            {"beamforming_gain_db", b.beamforming_gain_db},
            {"coding_gain_db", b.coding_gain_db},
            {"noise_power_dbm", b.noise_power_dbm},
            {"noise_figure_db", b.noise_figure_db},
            {"modulation", std::string(channel::to_string(b.modulation))},
            {"block_length_bits", b.block_length_bits}};
}

channel::LinkBudget budget_from(const json& j)
{
    channel::LinkBudget b;
    b.tx_power_dbm = j.at("tx_power_dbm").get<double>();
    b.beamforming_gain_db = j.at("beamforming_gain_db").get<double>();
    b.coding_gain_db = j.at("coding_gain_db").get<double>();
    b.noise_power_dbm = j.at("noise_power_dbm").get<double>();
    b.noise_figure_db = j.at("noise_figure_db").get<double>();
    const auto mod = j.at("modulation").get<std::string>();
    if (mod == "qpsk")
        b.modulation = channel::Modulation::qpsk;
    else if (mod == "64qam")
        b.modulation = channel::Modulation::qam64;
    else
        throw ConfigError("unknown modulation '" + mod + "' (expected qpsk or 64qam)");
    b.block_length_bits = j.at("block_length_bits").get<int>();
    return b;
}

json pathloss_json(const channel::PathLossCoefficients& c)
{
    return {{"intercept_db", c.intercept_db}, {"exponent", c.exponent}, {"shadowing_db", c.shadowing_db}};
}

channel::PathLossCoefficients pathloss_from(const json& j)
{
    return {j.at("intercept_db").get<double>(), j.at("exponent").get<double>(), j.at("shadowing_db").get<double>()};
}

// Every key of `input` must exist in `reference`, recursively through objects.
void check_keys(const json& input, const json& reference, const std::string& path)
{
    if (!input.is_object() || !reference.is_object())
        return;
    for (const auto& [key, value] : input.items())
    {
        const auto where = path.empty() ? key : path + "." + key;
        if (!reference.contains(key))
            throw ConfigError("unknown configuration key '" + where + "'");
        check_keys(value, reference.at(key), where);
    }
}

void overlay(json& base, const json& input)
{
    for (const auto& [key, value] : input.items())
    {
        auto& slot = base[key];
        if (slot.is_object() && value.is_object())
            overlay(slot, value);
        else
            slot = value;
    }
}

} // namespace

gf::Field make_field(const FieldConfig& config)
{
    return config.polynomial ? gf::Field(config.q, *config.polynomial) : gf::Field(config.q);
}

deployment::StreetScenario ScenarioConfig::street(double inter_relay_distance_m) const
{
    return {relay_count, inter_relay_distance_m, street_width_m, sidewalk_offset_m, device_count};
}

ExperimentConfig default_config()
{
    ExperimentConfig c;
    c.bounds.erasures = grid(0.0, 0.95, 0.05);
    c.phi.erasures = grid(0.0, 0.9, 0.1);
    return c;
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    try
    {
        for (double d : scenario.inter_relay_distances_m)
            scenario.street(d).validate();
        channel.validate();
        downlink_budget.validate();
        uplink_budget.validate();
    }
    catch (const std::invalid_argument& e)
    {
        fail(e.what());
    }
    if (scenario.inter_relay_distances_m.empty())
        fail("scenario.inter_relay_distances_m must not be empty");
    if (timespan.packets_per_span < 1)
        fail("timespan.packets_per_span must be at least 1");
    if (timespan.spans_per_device < 1)
        fail("timespan.spans_per_device must be at least 1");
    if (timespan.code_lengths.empty())
        fail("timespan.code_lengths must not be empty");
    for (int z : timespan.code_lengths)
        if (z < 1)
            fail("timespan.code_lengths entries must be at least 1");
    if (replications < 1)
        fail("replications must be at least 1");
    if (bounds.max_relays < 1 || bounds.uplink_relays < 1 || bounds.simulation_spans < 1)
        fail("bounds relay counts and simulation spans must be at least 1");
    for (auto [lo, hi] : bounds.erasure_pairs)
        if (!(lo >= 0.0 && lo < 1.0 && hi >= 0.0 && hi < 1.0))
            fail("bounds.erasure_pairs entries must lie in [0, 1)");
    for (int z : bounds.code_lengths)
        if (z < 1)
            fail("bounds.code_lengths entries must be at least 1");
    for (double p : bounds.erasures)
        if (!(p >= 0.0 && p < 1.0))
            fail("bounds.erasures entries must lie in [0, 1)");
    if (!(bounds.series_tolerance > 0.0) || bounds.max_terms < 1)
        fail("bounds.series_tolerance must be positive and bounds.max_terms at least 1");
    for (int z : phi.code_lengths)
        if (z < 1)
            fail("phi.code_lengths entries must be at least 1");
    for (double p : phi.erasures)
        if (!(p >= 0.0 && p <= 1.0))
            fail("phi.erasures entries must lie in [0, 1]");
    if (phi.trials < 1)
        fail("phi.trials must be at least 1");
    try
    {
        make_field(field);
        for (auto q : phi.field_sizes)
            gf::Field{q};
        gf::Field{bounds.field_size};
    }
    catch (const std::invalid_argument& e)
    {
        fail(e.what());
    }
}

json to_json(const ExperimentConfig& c)
{
    json pinned = nullptr;
    if (c.channel.states.pinned)
        pinned = *c.channel.states.pinned;
    json fixed = nullptr;
    if (c.channel.fixed_erasure)
        fixed = *c.channel.fixed_erasure;
    json poly = nullptr;
    if (c.field.polynomial)
        poly = *c.field.polynomial;

    json pairs = json::array();
    for (auto [lo, hi] : c.bounds.erasure_pairs)
        pairs.push_back({lo, hi});

    return {
        {"field", {{"q", c.field.q}, {"polynomial", poly}}},
        {"scenario",
         {{"relay_count", c.scenario.relay_count},
          {"inter_relay_distances_m", c.scenario.inter_relay_distances_m},
          {"street_width_m", c.scenario.street_width_m},
          {"sidewalk_offset_m", c.scenario.sidewalk_offset_m},
          {"device_count", c.scenario.device_count}}},
        {"channel",
         {{"carrier_ghz", c.channel.carrier_ghz},
          {"erasure_threshold", c.channel.erasure_threshold},
          {"min_distance_m", c.channel.min_distance_m},
          {"los", pathloss_json(c.channel.los)},
          {"nlos", pathloss_json(c.channel.nlos)},
          {"state_probability",
           {{"outage_scale_m", c.channel.states.outage_scale_m},
            {"outage_offset", c.channel.states.outage_offset},
            {"los_scale_m", c.channel.states.los_scale_m},
            {"pinned", pinned}}},
          {"ber_snr_scale", std::string(channel::to_string(c.channel.ber_snr_scale))},
          {"fixed_erasure", fixed}}},
        {"downlink_budget", budget_json(c.downlink_budget)},
        {"uplink_budget", budget_json(c.uplink_budget)},
        {"timespan",
         {{"packets_per_span", c.timespan.packets_per_span},
          {"code_lengths", c.timespan.code_lengths},
          {"spans_per_device", c.timespan.spans_per_device}}},
        {"uplink_grouping", c.uplink_grouping == Grouping::proximity ? "proximity" : "random"},
        {"bounds",
         {{"max_relays", c.bounds.max_relays},
          {"erasure_pairs", pairs},
          {"code_lengths", c.bounds.code_lengths},
          {"field_size", c.bounds.field_size},
          {"uplink_relays", c.bounds.uplink_relays},
          {"erasures", c.bounds.erasures},
          {"simulate", c.bounds.simulate},
          {"simulation_spans", c.bounds.simulation_spans},
          {"series_tolerance", c.bounds.series_tolerance},
          {"max_terms", c.bounds.max_terms}}},
        {"phi",
         {{"code_lengths", c.phi.code_lengths},
          {"field_sizes", c.phi.field_sizes},
          {"erasures", c.phi.erasures},
          {"trials", c.phi.trials}}},
        {"replications", c.replications},
        {"seed", c.seed},
        {"output_dir", c.output_dir},
        {"threads", c.threads},
        {"emit_spans", c.emit_spans},
    };
}

ExperimentConfig from_json(const json& input)
{
    if (!input.is_object())
        throw ConfigError("configuration must be a JSON object");
    json merged = to_json(default_config());
    check_keys(input, merged, "");
    overlay(merged, input);

    try
    {
        ExperimentConfig c;
        const auto& f = merged.at("field");
        c.field.q = f.at("q").get<std::uint32_t>();
        if (!f.at("polynomial").is_null())
            c.field.polynomial = f.at("polynomial").get<std::uint32_t>();

        const auto& s = merged.at("scenario");
        c.scenario.relay_count = s.at("relay_count").get<int>();
        c.scenario.inter_relay_distances_m = s.at("inter_relay_distances_m").get<std::vector<double>>();
        c.scenario.street_width_m = s.at("street_width_m").get<double>();
        c.scenario.sidewalk_offset_m = s.at("sidewalk_offset_m").get<double>();
        c.scenario.device_count = s.at("device_count").get<int>();

        const auto& ch = merged.at("channel");
        c.channel.carrier_ghz = ch.at("carrier_ghz").get<double>();
        c.channel.erasure_threshold = ch.at("erasure_threshold").get<double>();
        c.channel.min_distance_m = ch.at("min_distance_m").get<double>();
        c.channel.los = pathloss_from(ch.at("los"));
        c.channel.nlos = pathloss_from(ch.at("nlos"));
        const auto& sp = ch.at("state_probability");
        c.channel.states.outage_scale_m = sp.at("outage_scale_m").get<double>();
        c.channel.states.outage_offset = sp.at("outage_offset").get<double>();
        c.channel.states.los_scale_m = sp.at("los_scale_m").get<double>();
        if (!sp.at("pinned").is_null())
            c.channel.states.pinned = sp.at("pinned").get<std::array<double, 3>>();
        const auto scale = ch.at("ber_snr_scale").get<std::string>();
        if (scale == "linear")
            c.channel.ber_snr_scale = channel::BerSnrScale::linear;
        else if (scale == "db")
            c.channel.ber_snr_scale = channel::BerSnrScale::db;
        else
            throw ConfigError("channel.ber_snr_scale must be 'linear' or 'db', got '" + scale + "'");
        if (!ch.at("fixed_erasure").is_null())
            c.channel.fixed_erasure = ch.at("fixed_erasure").get<double>();

        c.downlink_budget = budget_from(merged.at("downlink_budget"));
        c.uplink_budget = budget_from(merged.at("uplink_budget"));

        const auto& t = merged.at("timespan");
        c.timespan.packets_per_span = t.at("packets_per_span").get<int>();
        c.timespan.code_lengths = t.at("code_lengths").get<std::vector<int>>();
        c.timespan.spans_per_device = t.at("spans_per_device").get<int>();

        const auto grouping = merged.at("uplink_grouping").get<std::string>();
        if (grouping == "proximity")
            c.uplink_grouping = Grouping::proximity;
        else if (grouping == "random")
            c.uplink_grouping = Grouping::random;
        else
            throw ConfigError("uplink_grouping must be 'proximity' or 'random', got '" + grouping + "'");

        const auto& b = merged.at("bounds");
        c.bounds.max_relays = b.at("max_relays").get<int>();
        c.bounds.erasure_pairs.clear();
        for (const auto& pair : b.at("erasure_pairs"))
        {
            const auto v = pair.get<std::vector<double>>();
            if (v.size() != 2)
                throw ConfigError("bounds.erasure_pairs entries must be [low, high]");
            c.bounds.erasure_pairs.emplace_back(v[0], v[1]);
        }
        c.bounds.code_lengths = b.at("code_lengths").get<std::vector<int>>();
        c.bounds.field_size = b.at("field_size").get<std::uint32_t>();
        c.bounds.uplink_relays = b.at("uplink_relays").get<int>();
        c.bounds.erasures = b.at("erasures").get<std::vector<double>>();
        c.bounds.simulate = b.at("simulate").get<bool>();
        c.bounds.simulation_spans = b.at("simulation_spans").get<int>();
        c.bounds.series_tolerance = b.at("series_tolerance").get<double>();
        c.bounds.max_terms = b.at("max_terms").get<std::size_t>();

        const auto& ph = merged.at("phi");
        c.phi.code_lengths = ph.at("code_lengths").get<std::vector<int>>();
        c.phi.field_sizes = ph.at("field_sizes").get<std::vector<std::uint32_t>>();
        c.phi.erasures = ph.at("erasures").get<std::vector<double>>();
        c.phi.trials = ph.at("trials").get<std::uint64_t>();

        c.replications = merged.at("replications").get<int>();
        c.seed = merged.at("seed").get<std::uint64_t>();
        c.output_dir = merged.at("output_dir").get<std::string>();
        c.threads = merged.at("threads").get<unsigned>();
        c.emit_spans = merged.at("emit_spans").get<bool>();
        c.validate();
        return c;
    }
    catch (const json::exception& e)
    {
        throw ConfigError(std::string("configuration type error: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open configuration file '" + path.string() + "'");
    try
    {
        return from_json(json::parse(in));
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError("configuration is not valid JSON: " + std::string(e.what()));
    }
}

std::string config_hash(const ExperimentConfig& config)
{
    // Runtime-only settings do not change results and stay out of the hash.
    auto j = to_json(config);
    j.erase("threads");
    j.erase("output_dir");
    const auto text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text)
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mmnc::cli
