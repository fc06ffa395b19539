// SPDX-License-Identifier: Apache-2.0

#include "mmnc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mmnc/rlnc.hpp"

namespace mmnc::bounds {

namespace {

void check_probability(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("erasure probability must lie in [0, 1], got " + std::to_string(p));
}

void check_links(std::span<const double> erasures)
{
    if (erasures.empty())
        throw DomainError("at least one relay is required");
    for (double p : erasures)
    {
        check_probability(p);
        if (p >= 1.0)
            throw DomainError("an erasure probability of 1 has no finite expected transmission count");
    }
}

double inverse_success_sum(std::span<const double> erasures)
{
    double s = 0.0;
    for (double p : erasures)
        s += 1.0 / (1.0 - p);
    return s;
}

double success_sum(std::span<const double> erasures)
{
    double s = 0.0;
    for (double p : erasures)
        s += 1.0 - p;
    return s;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b)
{
    return (a + b - 1) / b;
}

} // namespace

void DownlinkScenario::validate() const
{
    if (k < 1)
        throw DomainError("k must be at least 1");
    check_links(erasures);
}

double eff_forwarding(const DownlinkScenario& s)
{
    s.validate();
    const auto rounds = ceil_div(static_cast<std::uint64_t>(s.k), s.relays());
    return s.k / (static_cast<double>(rounds) * inverse_success_sum(s.erasures));
}

double eff_forwarding_ub(std::span<const double> erasures)
{
    check_links(erasures);
    return static_cast<double>(erasures.size()) / inverse_success_sum(erasures);
}

double eff_nc_lb(std::span<const double> erasures)
{
    if (erasures.empty())
        throw DomainError("at least one relay is required");
    for (double p : erasures)
        check_probability(p);
    return success_sum(erasures) / static_cast<double>(erasures.size());
}

double eff_nc_expected(std::span<const double> erasures, std::uint64_t transmissions)
{
    if (transmissions < 1)
        throw DomainError("at least one transmission is required");
    eff_nc_lb(erasures);
    const auto per_relay = ceil_div(transmissions, erasures.size());
    return static_cast<double>(per_relay) * success_sum(erasures) / static_cast<double>(transmissions);
}

std::uint64_t nc_transmissions_for(const DownlinkScenario& s)
{
    s.validate();
    const double per_round = success_sum(s.erasures);
    auto rounds = static_cast<std::uint64_t>(std::ceil(s.k / per_round));
    // Guard the ceiling against representation error on either side.
    while (rounds > 1 && static_cast<double>(rounds - 1) * per_round >= s.k)
        --rounds;
    while (static_cast<double>(rounds) * per_round < s.k)
        ++rounds;
    return std::max<std::uint64_t>(rounds, 1) * s.relays();
}

double expected_device_attempts(std::span<const double> erasures)
{
    if (erasures.empty())
        throw DomainError("at least one relay is required");
    double all_lost = 1.0;
    for (double p : erasures)
    {
        check_probability(p);
        all_lost *= p;
    }
    if (all_lost >= 1.0)
        throw DomainError("every link erases the packet; no finite attempt count");
    return 1.0 / (1.0 - all_lost);
}

ForwardingBackhaul bkeff_forwarding(const std::vector<std::vector<double>>& erasures)
{
    if (erasures.empty())
        throw DomainError("at least one device is required");
    double clamped = 0.0;
    double raw = 0.0;
    for (const auto& row : erasures)
    {
        const double attempts = expected_device_attempts(row);
        double copies = 0.0;
        for (double p : row)
            copies += 1.0 - std::pow(p, attempts);
        raw += copies;
        clamped += std::max(1.0, copies);
    }
    const auto z = static_cast<double>(erasures.size());
    return {z / clamped, z / raw};
}

double bkeff_forwarding_symmetric(double p, int relays)
{
    if (relays < 1)
        throw DomainError("at least one relay is required");
    check_probability(p);
    if (p >= 1.0)
        throw DomainError("an erasure probability of 1 has no finite expected transmission count");
    const double exponent = 1.0 / (1.0 - std::pow(p, relays));
    return std::min(1.0, 1.0 / (relays * (1.0 - std::pow(p, exponent))));
}

boost::multiprecision::cpp_int zeta(int z, long l)
{
    if (z < 1)
        throw DomainError("code length must be at least 1");
    if (l < -1)
        throw DomainError("zeta is defined for l >= -1");
    if (l == -1)
        return 0;
    // C(z + l, z) = prod_{i=1..l} (z + i) / i, exact at every step.
    boost::multiprecision::cpp_int c = 1;
    for (long i = 1; i <= l; ++i)
        c = c * (z + i) / i;
    return c;
}

long double lbar(int z, std::uint32_t q, double p)
{
    if (z < 1)
        throw DomainError("code length must be at least 1");
    if (q < 2)
        throw DomainError("field size must be at least 2");
    check_probability(p);

    const long double ql = q;
    const long double lambda = 1.0L - ql * (1.0L - p) / (ql - 1.0L);
    long double sum = 0.0L;
    long double binom = 1.0L;
    for (int k = 1; k <= z; ++k)
    {
        binom = binom * (z - k + 1) / k;
        const long double weight = binom * std::pow(ql - 1.0L, k) * std::pow(ql, -static_cast<long double>(z));
        const long double inner = 1.0L + (ql - 1.0L) * std::pow(lambda, k);
        sum += weight * std::pow(inner, z);
    }
    return sum;
}

long double phi_ub(int z, std::uint32_t q, double p)
{
    return std::log1p(lbar(z, q, p)) / std::log(static_cast<long double>(q));
}

SeriesResult beta_nc(int z, long double phi, const SeriesControl& control)
{
    if (z < 1)
        throw DomainError("code length must be at least 1");
    if (!(phi >= 0.0L))
        throw DomainError("phi must be non-negative");
    if (phi >= 1.0L)
        throw InfeasibleBound("backhaul series diverges for phi >= 1");
    if (!(control.tolerance > 0.0L) || control.max_terms < 1)
        throw DomainError("series control needs a positive tolerance and at least one term");

    SeriesResult r;
    if (phi == 0.0L)
    {
        // Only the l = 0 term survives: z * (1 - 0) * 0^0.
        r.value = z;
        r.terms = 1;
        return r;
    }

    const long double log_phi = std::log(phi);
    const long double geometric = (1.0L - phi);
    boost::multiprecision::cpp_int zeta_prev = 0; // zeta(l - 1)
    boost::multiprecision::cpp_int zeta_cur = 1;  // zeta(l)
    for (long l = 0; static_cast<std::size_t>(l) < control.max_terms; ++l)
    {
        const auto zp = zeta_prev.convert_to<long double>();
        const auto delta = (zeta_cur - zeta_prev).convert_to<long double>();
        const long double prev_power = std::exp(zp * log_phi);
        const long double term = (z + l) * -std::expm1(delta * log_phi) * prev_power;
        r.value += term;
        r.terms = static_cast<std::size_t>(l) + 1;

        // Remaining terms are bounded by phi^zeta(l) * sum_j (z + l + 1 + j) phi^j.
        const long double cur_power = std::exp(zeta_cur.convert_to<long double>() * log_phi);
        r.tail_bound = cur_power * ((z + l + 1) / geometric + phi / (geometric * geometric));
        if (cur_power == 0.0L || r.tail_bound < control.tolerance * r.value)
            break;

        zeta_prev = zeta_cur;
        zeta_cur = zeta_cur * (z + l + 1) / (l + 1);
    }
    return r;
}

NcBackhaulBound bkeff_nc_lb(int z, std::uint32_t q, double p, int relays, const SeriesControl& control)
{
    if (relays < 1)
        throw DomainError("at least one relay is required");
    NcBackhaulBound out;
    out.phi_ub = phi_ub(z, q, p);
    out.feasible = out.phi_ub < 1.0L;
    if (!out.feasible)
        return out;
    out.transmissions = beta_nc(z, out.phi_ub, control);
    long double denom = out.transmissions->value;
    if (relays > z)
        denom = std::max(denom, static_cast<long double>(relays));
    out.efficiency = static_cast<double>(z / denom);
    return out;
}

NcBackhaulBound bkeff_nc_lb(int z, std::uint32_t q, const std::vector<std::vector<double>>& erasures,
                            const SeriesControl& control)
{
    if (erasures.empty() || erasures.front().empty())
        throw DomainError("erasure matrix must be non-empty");
    if (erasures.size() != static_cast<std::size_t>(z))
        throw DomainError("erasure matrix must have one row per device");
    const double p = erasures.front().front();
    for (const auto& row : erasures)
    {
        if (row.size() != erasures.front().size())
            throw DomainError("erasure matrix rows must have equal length");
        for (double v : row)
            if (v != p)
                throw DomainError("the coded backhaul bound is only available for symmetric erasures");
    }
    return bkeff_nc_lb(z, q, p, static_cast<int>(erasures.front().size()), control);
}

PhiEstimate phi_oracle(const gf::Field& field, int z, double p, std::uint64_t trials, RandomStream& rng)
{
    if (z < 1)
        throw DomainError("matrix size must be at least 1");
    if (trials < 1)
        throw DomainError("at least one trial is required");
    check_probability(p);

    const auto n = static_cast<std::size_t>(z);
    std::vector<rlnc::CoefficientRow> rows(n, rlnc::CoefficientRow(n));
    std::uint64_t singular = 0;
    for (std::uint64_t t = 0; t < trials; ++t)
    {
        for (auto& row : rows)
            for (auto& e : row)
                e = field.sample_omega(p, rng);
        if (rlnc::matrix_rank(field, rows) < n)
            ++singular;
    }
    PhiEstimate est;
    est.trials = trials;
    est.estimate = static_cast<double>(singular) / static_cast<double>(trials);
    est.standard_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
    return est;
}

} // namespace mmnc::bounds
