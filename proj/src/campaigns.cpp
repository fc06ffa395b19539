// SPDX-License-Identifier: Apache-2.0

#include "mmnc/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>

#include "mmnc/bounds.hpp"
#include "mmnc/channel.hpp"
#include "mmnc/deployment.hpp"
#include "mmnc/parallel.hpp"
#include "mmnc/sim.hpp"

namespace mmnc::cli {

namespace {

std::string hex(std::uint32_t v)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%X", v);
    return buf;
}

std::string campaign_id(double inter_relay_distance_m)
{
    return "dr" + format_double(inter_relay_distance_m);
}

std::vector<double> cdf_levels()
{
    std::vector<double> levels;
    for (int i = 0; i <= 20; ++i)
        levels.push_back(i / 20.0);
    return levels;
}

double median_or_nan(const std::vector<double>& v)
{
    return v.empty() ? std::numeric_limits<double>::quiet_NaN() : stats::median(v);
}

/// Wide quantile table: one `quantile` column plus one column per series.
CsvDocument cdf_table(const std::vector<std::pair<std::string, std::vector<double>>>& series)
{
    std::vector<std::string> columns{"quantile"};
    for (const auto& [name, values] : series)
        columns.push_back(name);
    CsvDocument doc(columns);
    for (double level : cdf_levels())
    {
        CsvDocument::Row row;
        row << level;
        for (const auto& [name, values] : series)
            row << (values.empty() ? std::numeric_limits<double>::quiet_NaN() : stats::quantile(values, level));
        doc.add(std::move(row));
    }
    return doc;
}

} // namespace

void CampaignOutput::write(const std::filesystem::path& dir) const
{
    std::filesystem::create_directories(dir);
    for (const auto& f : files)
        f.document.write(dir / f.filename);
}

void stamp(CsvDocument& doc, const std::string& command, const ExperimentConfig& config)
{
    const auto field = make_field(config.field);
    doc.add_meta("tool", "nccomp " + command);
    doc.add_meta("seed", std::to_string(config.seed));
    doc.add_meta("config_hash", config_hash(config));
    doc.add_meta("field", "GF(" + std::to_string(field.size()) + ") polynomial=" + hex(field.polynomial()));
    doc.add_meta("replications", std::to_string(config.replications));
}

// ---- bounds ---------------------------------------------------------------

SymmetricUplinkEstimate simulate_symmetric_uplink(const gf::Field& field, int z, int relays, double p,
                                                  std::uint64_t spans, RandomStream& rng)
{
    const std::vector<std::vector<double>> erasure(static_cast<std::size_t>(z),
                                                   std::vector<double>(static_cast<std::size_t>(relays), p));
    std::vector<double> delivered, forwarding, nc;
    delivered.reserve(spans);
    forwarding.reserve(spans);
    nc.reserve(spans);
    for (std::uint64_t s = 0; s < spans; ++s)
    {
        const auto span = sim::run_uplink_span(field, erasure, rng);
        if (!span)
            continue;
        delivered.push_back(static_cast<double>(span->active_devices));
        forwarding.push_back(static_cast<double>(span->forwarding_backhaul));
        nc.push_back(static_cast<double>(span->nc_backhaul));
    }
    SymmetricUplinkEstimate out;
    out.spans = delivered.size();
    if (!delivered.empty())
    {
        out.forwarding = stats::ratio(delivered, forwarding);
        out.nc = stats::ratio(delivered, nc);
    }
    return out;
}

BoundsResult run_bounds_figures(const ExperimentConfig& config)
{
    config.validate();
    BoundsResult result;

    CsvDocument down({"p_low", "p_high", "scenario", "relays", "eff_forwarding_ub", "eff_nc_lb", "gap"});
    stamp(down, "bounds", config);
    for (auto [lo, hi] : config.bounds.erasure_pairs)
    {
        for (int n = 1; n <= config.bounds.max_relays; ++n)
        {
            const auto size = static_cast<std::size_t>(n);
            std::vector<std::pair<std::string, std::vector<double>>> scenarios{
                {"symmetric_low", std::vector<double>(size, lo)},
                {"symmetric_high", std::vector<double>(size, hi)},
                {"one_low", std::vector<double>(size, hi)},
                {"one_high", std::vector<double>(size, lo)},
            };
            scenarios[2].second[0] = lo;
            scenarios[3].second[0] = hi;
            for (const auto& [name, p] : scenarios)
            {
                const double f = bounds::eff_forwarding_ub(p);
                const double c = bounds::eff_nc_lb(p);
                CsvDocument::Row row;
                row << lo << hi << name << n << f << c << (c - f);
                down.add(std::move(row));
            }
        }
    }

    CsvDocument up({"z", "q", "relays", "p", "phi_ub", "feasible", "bkeff_nc_lb", "beta_nc", "tail_bound",
                    "terms", "bkeff_forwarding", "bkeff_forwarding_unclamped", "sim_spans", "sim_forwarding",
                    "sim_forwarding_se", "sim_nc", "sim_nc_se"});
    stamp(up, "bounds", config);

    const gf::Field field(config.bounds.field_size);
    const int relays = config.bounds.uplink_relays;
    const auto& zs = config.bounds.code_lengths;
    const auto& ps = config.bounds.erasures;
    const bounds::SeriesControl control{static_cast<long double>(config.bounds.series_tolerance),
                                        config.bounds.max_terms};

    struct Cell
    {
        bounds::NcBackhaulBound nc;
        bounds::ForwardingBackhaul forwarding;
        std::optional<SymmetricUplinkEstimate> simulated;
    };
    std::vector<Cell> cells(zs.size() * ps.size());
    parallel_for(cells.size(), config.threads, [&](std::size_t idx) {
        const auto zi = idx / ps.size();
        const auto pi = idx % ps.size();
        const int z = zs[zi];
        const double p = ps[pi];
        Cell& cell = cells[idx];
        cell.nc = bounds::bkeff_nc_lb(z, field.size(), p, relays, control);
        cell.forwarding = bounds::bkeff_forwarding(std::vector<std::vector<double>>(
            static_cast<std::size_t>(z), std::vector<double>(static_cast<std::size_t>(relays), p)));
        if (config.bounds.simulate)
        {
            SymmetricUplinkEstimate pooled;
            std::vector<double> num, fwd, nc;
            for (int r = 0; r < config.replications; ++r)
            {
                RandomStream rng(derive_seed(config.seed, {3, zi, pi, static_cast<std::uint64_t>(r)}));
                // Per-span samples are needed for a pooled standard error, so
                // the replication loop is unrolled here rather than averaged.
                const std::vector<std::vector<double>> erasure(
                    static_cast<std::size_t>(z), std::vector<double>(static_cast<std::size_t>(relays), p));
                for (int s = 0; s < config.bounds.simulation_spans; ++s)
                {
                    const auto span = sim::run_uplink_span(field, erasure, rng);
                    if (!span)
                        continue;
                    num.push_back(static_cast<double>(span->active_devices));
                    fwd.push_back(static_cast<double>(span->forwarding_backhaul));
                    nc.push_back(static_cast<double>(span->nc_backhaul));
                }
            }
            pooled.spans = num.size();
            if (!num.empty())
            {
                pooled.forwarding = stats::ratio(num, fwd);
                pooled.nc = stats::ratio(num, nc);
            }
            cell.simulated = pooled;
        }
    });

    for (std::size_t idx = 0; idx < cells.size(); ++idx)
    {
        const int z = zs[idx / ps.size()];
        const double p = ps[idx % ps.size()];
        const Cell& cell = cells[idx];
        CsvDocument::Row row;
        row << z << field.size() << relays << p << static_cast<double>(cell.nc.phi_ub)
            << (cell.nc.feasible ? "1" : "0");
        if (cell.nc.efficiency)
            row << *cell.nc.efficiency << static_cast<double>(cell.nc.transmissions->value)
                << static_cast<double>(cell.nc.transmissions->tail_bound)
                << static_cast<std::uint64_t>(cell.nc.transmissions->terms);
        else
        {
            ++result.undefined_cells;
            row << "undefined" << "undefined" << "undefined" << "undefined";
        }
        row << cell.forwarding.approx << cell.forwarding.unclamped;
        if (cell.simulated)
            row << cell.simulated->spans << cell.simulated->forwarding.value
                << cell.simulated->forwarding.standard_error << cell.simulated->nc.value
                << cell.simulated->nc.standard_error;
        else
            row << "" << "" << "" << "" << "";
        up.add(std::move(row));
    }

    result.output.files.push_back({"downlink_bounds.csv", std::move(down)});
    result.output.files.push_back({"uplink_bounds.csv", std::move(up)});
    return result;
}

// ---- downlink -------------------------------------------------------------

DownlinkResult run_downlink_campaign(const ExperimentConfig& config)
{
    config.validate();
    const auto field = make_field(config.field);
    const int k = config.timespan.packets_per_span;
    const int spans = config.timespan.spans_per_device;

    DownlinkResult result;
    CsvDocument devices_doc({"campaign", "replication", "span", "device", "scheme", "metric", "value"});
    stamp(devices_doc, "downlink", config);
    CsvDocument summary_doc({"campaign", "inter_relay_distance_m", "devices", "outage_devices",
                             "outage_spans", "median_eff_forwarding", "median_eff_nc", "median_gain", "median_slots_forwarding",
                             "median_slots_nc"});
    stamp(summary_doc, "downlink", config);
    std::vector<std::pair<std::string, std::vector<double>>> cdf_series;

    struct DeviceOutcome
    {
        std::uint64_t outage_spans = 0;
        sim::RunMetrics forwarding;
        sim::RunMetrics nc;
        std::vector<sim::RunMetrics> forwarding_spans;
        std::vector<sim::RunMetrics> nc_spans;
    };

    const auto& distances = config.scenario.inter_relay_distances_m;
    for (std::size_t c = 0; c < distances.size(); ++c)
    {
        const auto street = config.scenario.street(distances[c]);
        const auto relays = deployment::place_relays(street);
        const auto id = campaign_id(distances[c]);
        std::vector<double> eff_f, eff_c, slots_f, slots_c;
        std::size_t outage = 0;
        std::uint64_t outage_spans = 0;

        for (int r = 0; r < config.replications; ++r)
        {
            const auto rep = static_cast<std::uint64_t>(r);
            RandomStream drop_rng(derive_seed(config.seed, {1, c, rep, 0}));
            const auto devices = deployment::drop_devices(street, drop_rng);

            std::vector<DeviceOutcome> outcomes(devices.size());
            parallel_for(devices.size(), config.threads, [&](std::size_t d) {
                RandomStream rng(derive_seed(config.seed, {1, c, rep, 1, d}));
                auto& out = outcomes[d];
                for (int s = 0; s < spans; ++s)
                {
                    // Link states, shadowing and erasures are redrawn every span.
                    const auto links = channel::build_link_matrix(std::span(&devices[d], 1), relays,
                                                                  config.downlink_budget, config.channel, rng);
                    const auto usable = links.usable_erasures(0);
                    if (usable.empty())
                    {
                        ++out.outage_spans;
                        continue;
                    }
                    const auto f = sim::downlink_forwarding(k, usable, rng);
                    const auto n = sim::downlink_nc(field, k, usable, rng);
                    out.forwarding += *f;
                    out.nc += *n;
                    if (config.emit_spans)
                    {
                        out.forwarding_spans.push_back(*f);
                        out.nc_spans.push_back(*n);
                    }
                }
            });

            for (std::size_t d = 0; d < outcomes.size(); ++d)
            {
                const auto& o = outcomes[d];
                outage_spans += o.outage_spans;
                CsvDocument::Row tally;
                tally << id << r << "all" << static_cast<std::uint64_t>(d) << "none" << "outage_spans"
                      << static_cast<double>(o.outage_spans);
                devices_doc.add(std::move(tally));
                const auto served = spans - static_cast<int>(o.outage_spans);
                if (served == 0)
                {
                    ++outage;
                    continue;
                }
                const double ef = o.forwarding.efficiency();
                const double ec = o.nc.efficiency();
                const double sf = static_cast<double>(o.forwarding.slots_to_complete) / served;
                const double sc = static_cast<double>(o.nc.slots_to_complete) / served;
                eff_f.push_back(ef);
                eff_c.push_back(ec);
                slots_f.push_back(sf);
                slots_c.push_back(sc);
                for (std::size_t s = 0; s < o.forwarding_spans.size(); ++s)
                {
                    for (const auto& [scheme, m] : {std::pair{"forwarding", o.forwarding_spans[s]},
                                                    std::pair{"nc", o.nc_spans[s]}})
                    {
                        CsvDocument::Row a;
                        a << id << r << static_cast<std::uint64_t>(s) << static_cast<std::uint64_t>(d) << scheme
                          << "efficiency" << m.efficiency();
                        devices_doc.add(std::move(a));
                        CsvDocument::Row b;
                        b << id << r << static_cast<std::uint64_t>(s) << static_cast<std::uint64_t>(d) << scheme
                          << "slots" << static_cast<double>(m.slots_to_complete);
                        devices_doc.add(std::move(b));
                    }
                }
                for (const auto& [scheme, e, sl] :
                     {std::tuple{"forwarding", ef, sf}, std::tuple{"nc", ec, sc}})
                {
                    CsvDocument::Row a;
                    a << id << r << "all" << static_cast<std::uint64_t>(d) << scheme << "efficiency" << e;
                    devices_doc.add(std::move(a));
                    CsvDocument::Row b;
                    b << id << r << "all" << static_cast<std::uint64_t>(d) << scheme << "mean_slots" << sl;
                    devices_doc.add(std::move(b));
                }
            }
        }

        DownlinkSummary s;
        s.inter_relay_distance_m = distances[c];
        s.devices = eff_f.size() + outage;
        s.outage_devices = outage;
        s.outage_spans = outage_spans;
        s.median_eff_forwarding = median_or_nan(eff_f);
        s.median_eff_nc = median_or_nan(eff_c);
        s.median_gain = s.median_eff_nc / s.median_eff_forwarding - 1.0;
        s.median_slots_forwarding = median_or_nan(slots_f);
        s.median_slots_nc = median_or_nan(slots_c);
        result.summaries.push_back(s);

        CsvDocument::Row row;
        row << id << s.inter_relay_distance_m << static_cast<std::uint64_t>(s.devices)
            << static_cast<std::uint64_t>(s.outage_devices) << s.outage_spans << s.median_eff_forwarding << s.median_eff_nc
            << s.median_gain << s.median_slots_forwarding << s.median_slots_nc;
        summary_doc.add(std::move(row));

        cdf_series.emplace_back("efficiency_forwarding_" + id, std::move(eff_f));
        cdf_series.emplace_back("efficiency_nc_" + id, std::move(eff_c));
        cdf_series.emplace_back("slots_forwarding_" + id, std::move(slots_f));
        cdf_series.emplace_back("slots_nc_" + id, std::move(slots_c));
    }

    auto cdf_doc = cdf_table(cdf_series);
    stamp(cdf_doc, "downlink", config);
    result.output.files.push_back({"downlink_devices.csv", std::move(devices_doc)});
    result.output.files.push_back({"downlink_cdf.csv", std::move(cdf_doc)});
    result.output.files.push_back({"downlink_summary.csv", std::move(summary_doc)});
    return result;
}

// ---- uplink ---------------------------------------------------------------

std::vector<std::vector<std::size_t>> group_devices(const std::vector<deployment::Position>& devices, int z,
                                                    Grouping policy, RandomStream& rng)
{
    if (z < 1)
        throw std::invalid_argument("group size must be at least 1");
    const auto size = static_cast<std::size_t>(z);
    std::vector<std::vector<std::size_t>> groups;

    if (policy == Grouping::random)
    {
        std::vector<std::size_t> order(devices.size());
        std::iota(order.begin(), order.end(), 0);
        // Fisher-Yates on our own stream; std::shuffle is not portable across libraries.
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        for (std::size_t start = 0; start + size <= order.size(); start += size)
            groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                                order.begin() + static_cast<std::ptrdiff_t>(start + size));
        return groups;
    }

    std::vector<std::size_t> unassigned(devices.size());
    std::iota(unassigned.begin(), unassigned.end(), 0);
    while (unassigned.size() >= size)
    {
        const auto anchor_pos = rng.uniform_index(unassigned.size());
        const auto anchor = unassigned[anchor_pos];
        unassigned.erase(unassigned.begin() + static_cast<std::ptrdiff_t>(anchor_pos));
        std::vector<std::pair<double, std::size_t>> by_distance;
        by_distance.reserve(unassigned.size());
        for (auto d : unassigned)
            by_distance.emplace_back(deployment::distance(devices[anchor], devices[d]), d);
        std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(size - 1),
                          by_distance.end());
        std::vector<std::size_t> group{anchor};
        for (std::size_t i = 0; i + 1 < size; ++i)
            group.push_back(by_distance[i].second);
        std::vector<std::size_t> members(group.begin() + 1, group.end());
        std::sort(members.begin(), members.end());
        std::erase_if(unassigned,
                      [&](std::size_t d) { return std::binary_search(members.begin(), members.end(), d); });
        groups.push_back(std::move(group));
    }
    return groups;
}

UplinkResult run_uplink_campaign(const ExperimentConfig& config)
{
    config.validate();
    const auto field = make_field(config.field);
    const int spans = config.timespan.spans_per_device;

    UplinkResult result;
    CsvDocument groups_doc({"campaign", "replication", "z", "span", "group", "scheme", "metric", "value"});
    stamp(groups_doc, "uplink", config);
    CsvDocument summary_doc({"campaign", "inter_relay_distance_m", "z", "groups", "outage_groups",
                             "median_bkeff_forwarding", "median_bkeff_nc", "median_gain"});
    stamp(summary_doc, "uplink", config);
    std::vector<std::pair<std::string, std::vector<double>>> cdf_series;

    struct GroupOutcome
    {
        std::uint64_t delivered = 0;
        std::uint64_t forwarding = 0;
        std::uint64_t nc = 0;
        std::uint64_t excluded = 0;
        std::vector<sim::UplinkSpan> per_span;
    };

    const auto& distances = config.scenario.inter_relay_distances_m;
    const auto& zs = config.timespan.code_lengths;
    for (std::size_t c = 0; c < distances.size(); ++c)
    {
        const auto street = config.scenario.street(distances[c]);
        const auto relays = deployment::place_relays(street);
        const auto id = campaign_id(distances[c]);
        std::vector<std::vector<double>> eff_f(zs.size()), eff_c(zs.size());
        std::vector<std::size_t> outage_groups(zs.size(), 0);

        for (int r = 0; r < config.replications; ++r)
        {
            const auto rep = static_cast<std::uint64_t>(r);
            RandomStream drop_rng(derive_seed(config.seed, {2, c, rep, 0}));
            const auto devices = deployment::drop_devices(street, drop_rng);

            for (std::size_t zi = 0; zi < zs.size(); ++zi)
            {
                const int z = zs[zi];
                const auto zz = static_cast<std::uint64_t>(z);
                RandomStream group_rng(derive_seed(config.seed, {2, c, rep, 2, zz}));
                const auto groups = group_devices(devices, z, config.uplink_grouping, group_rng);

                std::vector<GroupOutcome> outcomes(groups.size());
                parallel_for(groups.size(), config.threads, [&](std::size_t g) {
                    RandomStream rng(derive_seed(config.seed, {2, c, rep, 3, zz, g}));
                    std::vector<deployment::Position> members;
                    for (auto d : groups[g])
                        members.push_back(devices[d]);
                    auto& out = outcomes[g];
                    for (int s = 0; s < spans; ++s)
                    {
                        const auto links =
                            channel::build_link_matrix(members, relays, config.uplink_budget, config.channel, rng);
                        std::vector<std::vector<double>> erasure;
                        for (std::size_t i = 0; i < members.size(); ++i)
                            erasure.push_back(links.erasure_row(i));
                        const auto span = sim::run_uplink_span(field, erasure, rng);
                        if (!span)
                        {
                            out.excluded += erasure.size();
                            continue;
                        }
                        out.delivered += span->active_devices;
                        out.forwarding += span->forwarding_backhaul;
                        out.nc += span->nc_backhaul;
                        out.excluded += span->excluded_devices;
                        if (config.emit_spans)
                            out.per_span.push_back(*span);
                    }
                });

                for (std::size_t g = 0; g < outcomes.size(); ++g)
                {
                    const auto& o = outcomes[g];
                    const auto gid = static_cast<std::uint64_t>(g);
                    if (o.delivered == 0)
                    {
                        ++outage_groups[zi];
                        CsvDocument::Row row;
                        row << id << r << z << "all" << gid << "none" << "outage" << 1.0;
                        groups_doc.add(std::move(row));
                        continue;
                    }
                    for (std::size_t s = 0; s < o.per_span.size(); ++s)
                    {
                        const auto& sp = o.per_span[s];
                        const auto act = static_cast<double>(sp.active_devices);
                        CsvDocument::Row a;
                        a << id << r << z << static_cast<std::uint64_t>(s) << gid << "forwarding"
                          << "backhaul_efficiency" << act / static_cast<double>(sp.forwarding_backhaul);
                        groups_doc.add(std::move(a));
                        CsvDocument::Row b;
                        b << id << r << z << static_cast<std::uint64_t>(s) << gid << "nc" << "backhaul_efficiency"
                          << act / static_cast<double>(sp.nc_backhaul);
                        groups_doc.add(std::move(b));
                    }
                    const double bf = static_cast<double>(o.delivered) / static_cast<double>(o.forwarding);
                    const double bc = static_cast<double>(o.delivered) / static_cast<double>(o.nc);
                    eff_f[zi].push_back(bf);
                    eff_c[zi].push_back(bc);
                    CsvDocument::Row a;
                    a << id << r << z << "all" << gid << "forwarding" << "backhaul_efficiency" << bf;
                    groups_doc.add(std::move(a));
                    CsvDocument::Row b;
                    b << id << r << z << "all" << gid << "nc" << "backhaul_efficiency" << bc;
                    groups_doc.add(std::move(b));
                    CsvDocument::Row e;
                    e << id << r << z << "all" << gid << "none" << "excluded_device_spans"
                      << static_cast<double>(o.excluded);
                    groups_doc.add(std::move(e));
                }
            }
        }

        for (std::size_t zi = 0; zi < zs.size(); ++zi)
        {
            UplinkSummary s;
            s.inter_relay_distance_m = distances[c];
            s.z = zs[zi];
            s.groups = eff_f[zi].size() + outage_groups[zi];
            s.outage_groups = outage_groups[zi];
            s.median_bkeff_forwarding = median_or_nan(eff_f[zi]);
            s.median_bkeff_nc = median_or_nan(eff_c[zi]);
            s.median_gain = s.median_bkeff_nc / s.median_bkeff_forwarding - 1.0;
            result.summaries.push_back(s);

            CsvDocument::Row row;
            row << id << s.inter_relay_distance_m << s.z << static_cast<std::uint64_t>(s.groups)
                << static_cast<std::uint64_t>(s.outage_groups) << s.median_bkeff_forwarding << s.median_bkeff_nc
                << s.median_gain;
            summary_doc.add(std::move(row));

            const auto suffix = "_z" + std::to_string(zs[zi]) + "_" + id;
            cdf_series.emplace_back("bkeff_forwarding" + suffix, std::move(eff_f[zi]));
            cdf_series.emplace_back("bkeff_nc" + suffix, std::move(eff_c[zi]));
        }
    }

    auto cdf_doc = cdf_table(cdf_series);
    stamp(cdf_doc, "uplink", config);
    result.output.files.push_back({"uplink_groups.csv", std::move(groups_doc)});
    result.output.files.push_back({"uplink_cdf.csv", std::move(cdf_doc)});
    result.output.files.push_back({"uplink_summary.csv", std::move(summary_doc)});
    return result;
}

// ---- phi ------------------------------------------------------------------

PhiResult run_phi_validation(const ExperimentConfig& config)
{
    config.validate();
    const auto& zs = config.phi.code_lengths;
    const auto& qs = config.phi.field_sizes;
    const auto& ps = config.phi.erasures;

    std::vector<gf::Field> fields;
    for (auto q : qs)
        fields.emplace_back(q);

    PhiResult result;
    result.rows.resize(zs.size() * qs.size() * ps.size());
    parallel_for(result.rows.size(), config.threads, [&](std::size_t idx) {
        const auto zi = idx / (qs.size() * ps.size());
        const auto qi = (idx / ps.size()) % qs.size();
        const auto pi = idx % ps.size();
        PhiRow& row = result.rows[idx];
        row.z = zs[zi];
        row.q = qs[qi];
        row.p = ps[pi];
        double singular = 0.0;
        for (int r = 0; r < config.replications; ++r)
        {
            RandomStream rng(derive_seed(config.seed, {4, zi, qi, pi, static_cast<std::uint64_t>(r)}));
            const auto est = bounds::phi_oracle(fields[qi], row.z, row.p, config.phi.trials, rng);
            singular += est.estimate * static_cast<double>(est.trials);
            row.trials += est.trials;
        }
        const auto n = static_cast<double>(row.trials);
        row.phi_hat = singular / n;
        row.standard_error = std::sqrt(row.phi_hat * (1.0 - row.phi_hat) / n);
        row.phi_ub = static_cast<double>(bounds::phi_ub(row.z, row.q, row.p));
        row.feasible = row.phi_ub < 1.0;
        row.within_bound = row.phi_hat <= row.phi_ub + 3.0 * row.standard_error;
    });

    CsvDocument doc({"z", "q", "p", "trials", "phi_hat", "se", "phi_ub", "feasible", "within_bound"});
    stamp(doc, "phi", config);
    for (const auto& r : result.rows)
    {
        CsvDocument::Row row;
        row << r.z << r.q << r.p << r.trials << r.phi_hat << r.standard_error << r.phi_ub
            << (r.feasible ? "1" : "0") << (r.feasible ? (r.within_bound ? "1" : "0") : "n/a");
        doc.add(std::move(row));
    }
    result.output.files.push_back({"phi_validation.csv", std::move(doc)});
    return result;
}

} // namespace mmnc::cli
