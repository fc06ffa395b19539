// SPDX-License-Identifier: Apache-2.0
//
// nccomp: bound tables, downlink/uplink campaigns and phi validation.
// Exit codes: 0 success, 2 configuration error, 3 undefined bound without --allow-undefined.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "mmnc/campaigns.hpp"
#include "mmnc/config.hpp"

namespace {

struct Overrides
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> replications;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config_path, "JSON experiment configuration (defaults when omitted)");
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--replications", o.replications, "independent replications");
}

mmnc::cli::ExperimentConfig resolve(const Overrides& o)
{
    auto config = o.config_path.empty() ? mmnc::cli::default_config() : mmnc::cli::load_config(o.config_path);
    if (o.seed)
        config.seed = *o.seed;
    if (o.out)
        config.output_dir = *o.out;
    if (o.replications)
        config.replications = *o.replications;
    config.validate();
    return config;
}

void report(const mmnc::cli::CampaignOutput& out, const std::string& dir)
{
    for (const auto& f : out.files)
        std::cout << dir << "/" << f.filename << " (" << f.document.rows() << " rows)\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Forwarding vs. network coding for mmWave multi-relay access"};
    app.require_subcommand(1);

    Overrides bounds_o, down_o, up_o, phi_o;
    bool allow_undefined = false;
    auto* bounds_cmd = app.add_subcommand("bounds", "analytic bound tables with simulated uplink points");
    add_common(bounds_cmd, bounds_o);
    bounds_cmd->add_flag("--allow-undefined", allow_undefined, "succeed even if some coded bounds are undefined");
    auto* down_cmd = app.add_subcommand("downlink", "per-device downlink efficiency campaign");
    add_common(down_cmd, down_o);
    auto* up_cmd = app.add_subcommand("uplink", "per-group uplink backhaul efficiency campaign");
    add_common(up_cmd, up_o);
    auto* phi_cmd = app.add_subcommand("phi", "empirical singularity probability against its bound");
    add_common(phi_cmd, phi_o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (bounds_cmd->parsed())
        {
            const auto config = resolve(bounds_o);
            const auto result = mmnc::cli::run_bounds_figures(config);
            result.output.write(config.output_dir);
            report(result.output, config.output_dir);
            if (result.undefined_cells > 0 && !allow_undefined)
            {
                std::cerr << "error: the coded backhaul bound is undefined at " << result.undefined_cells
                          << " (z, p) points; rerun with --allow-undefined to accept\n";
                return 3;
            }
        }
        else if (down_cmd->parsed())
        {
            const auto config = resolve(down_o);
            const auto result = mmnc::cli::run_downlink_campaign(config);
            result.output.write(config.output_dir);
            report(result.output, config.output_dir);
        }
        else if (up_cmd->parsed())
        {
            const auto config = resolve(up_o);
            const auto result = mmnc::cli::run_uplink_campaign(config);
            result.output.write(config.output_dir);
            report(result.output, config.output_dir);
        }
        else if (phi_cmd->parsed())
        {
            const auto config = resolve(phi_o);
            const auto result = mmnc::cli::run_phi_validation(config);
            result.output.write(config.output_dir);
            report(result.output, config.output_dir);
        }
    }
    catch (const mmnc::cli::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
