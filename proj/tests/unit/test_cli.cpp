// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "mmnc/campaigns.hpp"
#include "mmnc/config.hpp"

using namespace mmnc::cli;
using nlohmann::json;

namespace {

ExperimentConfig tiny()
{
    auto c = default_config();
    c.scenario.device_count = 40;
    c.timespan.spans_per_device = 10;
    c.bounds.simulation_spans = 50;
    c.bounds.erasures = {0.1, 0.5, 0.9};
    c.phi.trials = 500;
    c.phi.erasures = {0.0, 0.5};
    c.threads = 3;
    return c;
}

std::string all_csv(const CampaignOutput& out)
{
    std::string s;
    for (const auto& f : out.files)
        s += f.filename + "\n" + f.document.str();
    return s;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_tool(const std::string& args)
{
    const std::string cmd = std::string(NCCOMP_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("config JSON round trip and partial overrides")
{
    const auto d = default_config();
    CHECK(to_json(from_json(to_json(d))) == to_json(d));
    const auto c = from_json(json::parse(R"({"seed": 9, "scenario": {"device_count": 12}})"));
    CHECK(c.seed == 9);
    CHECK(c.scenario.device_count == 12);
    CHECK(c.scenario.relay_count == 10);
    CHECK(config_hash(c) != config_hash(d));
    CHECK(config_hash(d).size() == 16);
}

TEST_CASE("config rejects unknown keys, bad types and invalid values")
{
    CHECK_THROWS_AS(from_json(json::parse(R"({"sed": 1})")), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"channel": {"los": {"slope": 2}}})")), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"seed": "one"})")), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"replications": 0})")), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"field": {"q": 1000}})")), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"downlink_budget": {"modulation": "16qam"}})")), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"channel": {"erasure_threshold": 1.5}})")), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse("[1, 2]")), ConfigError);
}

TEST_CASE("shipped default template matches the built-in defaults")
{
    const auto shipped = json::parse(read_file(std::filesystem::path(SOURCE_DIR) / "config" / "default.json"));
    CHECK(shipped == to_json(default_config()));
    const auto calibrated = load_config(std::filesystem::path(SOURCE_DIR) / "config" / "ber_db_scale.json");
    CHECK(calibrated.channel.ber_snr_scale == mmnc::channel::BerSnrScale::db);
}

TEST_CASE("error-free channel: both schemes reach efficiency 1 and k slots")
{
    auto c = tiny();
    c.channel.states.pinned = std::array<double, 3>{0.0, 1.0, 0.0};
    c.channel.fixed_erasure = 0.0;
    c.scenario.inter_relay_distances_m = {30.0};
    const auto r = run_downlink_campaign(c);
    REQUIRE(r.summaries.size() == 1);
    const auto& s = r.summaries.front();
    CHECK(s.outage_devices == 0);
    CHECK(s.median_eff_forwarding == 1.0);
    CHECK(s.median_eff_nc == 1.0);
    CHECK(s.median_slots_forwarding == 8.0);
    CHECK(s.median_slots_nc == 8.0);
}

TEST_CASE("all-outage channel is tallied, not averaged")
{
    auto c = tiny();
    c.channel.states.pinned = std::array<double, 3>{1.0, 0.0, 0.0};
    c.scenario.inter_relay_distances_m = {60.0};
    const auto r = run_downlink_campaign(c);
    CHECK(r.summaries.front().outage_devices == 40);
    CHECK(r.summaries.front().outage_spans == 400);
    const auto u = run_uplink_campaign(c);
    for (const auto& s : u.summaries)
        CHECK(s.outage_groups == s.groups);
}

TEST_CASE("every file carries seed, config hash and field")
{
    const auto c = tiny();
    for (const auto& out : {run_phi_validation(c).output, run_bounds_figures(c).output})
        for (const auto& f : out.files)
        {
            const auto text = f.document.str();
            CHECK(text.find("# seed=1\n") != std::string::npos);
            CHECK(text.find("# config_hash=" + config_hash(c) + "\n") != std::string::npos);
            CHECK(text.find("# field=GF(1024) polynomial=0x409\n") != std::string::npos);
        }
}

TEST_CASE("campaigns are deterministic across runs and thread counts")
{
    auto c = tiny();
    const auto a = all_csv(run_downlink_campaign(c).output) + all_csv(run_uplink_campaign(c).output);
    c.threads = 1;
    const auto b = all_csv(run_downlink_campaign(c).output) + all_csv(run_uplink_campaign(c).output);
    CHECK(a == b);
    c.seed = 2;
    const auto other = all_csv(run_downlink_campaign(c).output);
    CHECK(other != a.substr(0, other.size()));
}

TEST_CASE("bounds tables mark the undefined region")
{
    const auto r = run_bounds_figures(tiny());
    CHECK(r.undefined_cells > 0);
    const auto text = r.output.files.at(1).document.str();
    CHECK(text.find("undefined") != std::string::npos);
}

TEST_CASE("device grouping partitions into groups of z")
{
    mmnc::deployment::StreetScenario s;
    s.device_count = 103;
    mmnc::RandomStream rng(1);
    const auto devices = mmnc::deployment::drop_devices(s, rng);
    for (auto policy : {Grouping::proximity, Grouping::random})
    {
        const auto groups = group_devices(devices, 4, policy, rng);
        CHECK(groups.size() == 25);
        std::set<std::size_t> seen;
        for (const auto& g : groups)
        {
            CHECK(g.size() == 4);
            seen.insert(g.begin(), g.end());
        }
        CHECK(seen.size() == 100);
    }
    // proximity: the first group's members are the anchor's nearest neighbours
    mmnc::RandomStream again(2);
    const auto groups = group_devices(devices, 4, Grouping::proximity, again);
    const auto& g = groups.front();
    double worst = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i)
        worst = std::max(worst, mmnc::deployment::distance(devices[g[0]], devices[g[i]]));
    for (std::size_t d = 0; d < devices.size(); ++d)
        if (std::find(g.begin(), g.end(), d) == g.end())
            CHECK(mmnc::deployment::distance(devices[g[0]], devices[d]) >= worst);
}

TEST_CASE("command line exit codes and byte-identical reruns")
{
    const auto dir = std::filesystem::temp_directory_path() / "nccomp_cli_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "tiny.json";
    {
        std::ofstream out(cfg);
        out << to_json(tiny()).dump();
    }
    const auto bad = dir / "bad.json";
    {
        std::ofstream out(bad);
        out << R"({"unknown": true})";
    }
    CHECK(run_tool("phi --config " + bad.string()) == 2);
    CHECK(run_tool("phi --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_tool("bounds --config " + cfg.string() + " --out " + (dir / "b").string()) == 3);
    CHECK(run_tool("bounds --allow-undefined --config " + cfg.string() + " --out " + (dir / "b").string()) == 0);
    CHECK(run_tool("uplink --config " + cfg.string() + " --seed 5 --out " + (dir / "u1").string()) == 0);
    CHECK(run_tool("uplink --config " + cfg.string() + " --seed 5 --out " + (dir / "u2").string()) == 0);
    for (const auto* name : {"uplink_groups.csv", "uplink_cdf.csv", "uplink_summary.csv"})
    {
        const auto first = read_file(dir / "u1" / name);
        CHECK_FALSE(first.empty());
        CHECK(first == read_file(dir / "u2" / name));
        CHECK(first.find("# seed=5\n") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}
