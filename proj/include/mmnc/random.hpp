// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmnc {

namespace detail {
__extension__ using uint128 = unsigned __int128;
} // namespace detail

/// SplitMix64 finalizer. Used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the substream identified by `ids` under `base`.
///
/// seed = s_n where s_0 = splitmix64(base) and s_{i+1} = splitmix64(s_i ^ ids[i]).
/// The derivation is stable across platforms and releases; output files depend on it.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> ids) noexcept
{
    std::uint64_t s = splitmix64(base);
    for (auto id : ids)
        s = splitmix64(s ^ id);
    return s;
}

/// A seeded pseudo-random stream with platform-independent draws.
///
/// std::mt19937_64 is fully specified by the standard, but the std
/// distributions are not, so every draw is built directly on the engine bits.
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n). n must be nonzero.
    std::uint64_t uniform_index(std::uint64_t n)
    {
        // Lemire's multiply-shift with rejection.
        detail::uint128 m = static_cast<detail::uint128>(engine_()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n)
        {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold)
            {
                m = static_cast<detail::uint128>(engine_()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal draw (Box-Muller, one value per call).
    double normal();

  private:
    std::mt19937_64 engine_;
};

} // namespace mmnc
