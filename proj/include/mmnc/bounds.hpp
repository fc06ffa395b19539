// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mmnc/gf.hpp"
#include "mmnc/random.hpp"

namespace mmnc::bounds {

/// An erasure probability of 1 (or a product of them) where a finite expectation is needed.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// Series evaluated outside its region of convergence (phi >= 1).
class InfeasibleBound : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// One device served by N relays with erasure probabilities p_1..p_N.
struct DownlinkScenario
{
    int k = 1;
    std::vector<double> erasures;

    std::size_t relays() const noexcept { return erasures.size(); }
    /// Throws DomainError unless k >= 1, N >= 1 and every p_i lies in [0, 1).
    void validate() const;
};

/// Expected Forwarding efficiency k / (ceil(k/N) * sum 1/(1 - p_i)).
double eff_forwarding(const DownlinkScenario& s);

/// Upper bound on Forwarding efficiency: N / sum 1/(1 - p_i) (harmonic mean of 1 - p_i).
double eff_forwarding_ub(std::span<const double> erasures);

/// Lower bound on coded efficiency: sum (1 - p_i) / N.
double eff_nc_lb(std::span<const double> erasures);

/// Coded efficiency after L transmissions: ceil(L/N) * sum(1 - p_i) / L.
double eff_nc_expected(std::span<const double> erasures, std::uint64_t transmissions);

/// Smallest number of whole relay rounds, in transmissions (a multiple of N),
/// whose expected receptions ceil(L/N) * sum(1 - p_i) reach k.
std::uint64_t nc_transmissions_for(const DownlinkScenario& s);

/// Expected broadcast attempts until some relay receives: 1 / (1 - prod_j p_j).
double expected_device_attempts(std::span<const double> erasures);

struct ForwardingBackhaul
{
    /// z / sum_i max(1, sum_j (1 - p_ij^E_i)), clamped per packet
    double approx = 0.0;
    /// z / sum_i sum_j (1 - p_ij^E_i), may exceed 1
    double unclamped = 0.0;
};

/// Approximate uplink Forwarding backhaul efficiency for an erasure matrix
/// (rows = devices, columns = relays).
ForwardingBackhaul bkeff_forwarding(const std::vector<std::vector<double>>& erasures);

/// Symmetric case: min[1, 1 / (N (1 - p^(1 / (1 - p^N))))].
double bkeff_forwarding_symmetric(double p, int relays);

/// zeta(l) = C(z + l, z), zeta(-1) = 0.
boost::multiprecision::cpp_int zeta(int z, long l);

/// Expected number of linear dependencies among the rows of a random z x z
/// matrix whose entries are 0 w.p. p and uniform nonzero otherwise over GF(q).
long double lbar(int z, std::uint32_t q, double p);

/// log_q(lbar + 1). The coded backhaul bound exists only where this is < 1.
long double phi_ub(int z, std::uint32_t q, double p);

struct SeriesControl
{
    long double tolerance = 1e-12L; // relative to the partial sum
    std::size_t max_terms = 1'000'000;
};

struct SeriesResult
{
    long double value = 0.0L;
    /// Rigorous upper bound on the omitted tail.
    long double tail_bound = 0.0L;
    std::size_t terms = 0;
};

/// Upper bound on expected backhaul transmissions until z coded packets are
/// independent, when each z x z selection is singular with probability phi:
///   sum_{l>=0} (z + l) [1 - phi^(zeta(l) - zeta(l-1))] phi^zeta(l-1)
/// Throws InfeasibleBound for phi >= 1 and DomainError for phi < 0.
SeriesResult beta_nc(int z, long double phi, const SeriesControl& control = {});

struct NcBackhaulBound
{
    bool feasible = false;
    long double phi_ub = 0.0L;
    std::optional<SeriesResult> transmissions;
    /// Lower bound on coded backhaul efficiency; empty where undefined.
    std::optional<double> efficiency;
};

/// z / beta_nc(phi_ub) for N <= z, z / max(N, beta_nc(phi_ub)) for N > z.
/// Outside the feasible region the result is marked undefined, not thrown.
NcBackhaulBound bkeff_nc_lb(int z, std::uint32_t q, double p, int relays, const SeriesControl& control = {});

/// Matrix form; only symmetric erasures are supported. Throws DomainError otherwise.
NcBackhaulBound bkeff_nc_lb(int z, std::uint32_t q, const std::vector<std::vector<double>>& erasures,
                            const SeriesControl& control = {});

struct PhiEstimate
{
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t trials = 0;
};

/// Fraction of sampled z x z matrices (entries i.i.d. zero w.p. p, else
/// uniform nonzero over `field`) that are singular.
PhiEstimate phi_oracle(const gf::Field& field, int z, double p, std::uint64_t trials, RandomStream& rng);

} // namespace mmnc::bounds
