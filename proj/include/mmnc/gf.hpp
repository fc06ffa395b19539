// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmnc/random.hpp"

namespace mmnc::gf {

/// An element of GF(2^m), stored as its polynomial bit pattern.
struct Element
{
    std::uint16_t value = 0;

    constexpr Element() = default;
    constexpr explicit Element(std::uint16_t v) : value(v) {}

    constexpr bool is_zero() const noexcept { return value == 0; }
    friend constexpr auto operator<=>(Element, Element) = default;
};

/// Inversion of zero or a mismatched field operand.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// True iff `poly` (bit i = coefficient of x^i) is irreducible over GF(2).
/// Checked by trial division with every polynomial of degree <= deg/2.
bool is_irreducible(std::uint32_t poly);

/// Default irreducible (primitive) reduction polynomial for GF(2^m), 1 <= m <= 16.
std::uint32_t default_polynomial(unsigned degree);

/// Arithmetic context of GF(q), q = 2^m with m in [1, 16].
///
/// Immutable after construction: log/antilog tables are built once, so one
/// instance can be shared by any number of threads.
class Field
{
  public:
    /// Field of size q with the default polynomial for its degree.
    explicit Field(std::uint32_t q = 1024);

    /// Field of size q reduced modulo `polynomial`. Throws std::invalid_argument
    /// if q is not a power of two in [2, 65536], if the polynomial degree does
    /// not match, or if it is reducible.
    Field(std::uint32_t q, std::uint32_t polynomial);

    std::uint32_t size() const noexcept { return q_; }
    unsigned degree() const noexcept { return degree_; }
    std::uint32_t polynomial() const noexcept { return polynomial_; }

    Element element(std::uint32_t v) const;

    static constexpr Element zero() noexcept { return Element{0}; }
    static constexpr Element one() noexcept { return Element{1}; }

    static constexpr Element add(Element a, Element b) noexcept
    {
        return Element{static_cast<std::uint16_t>(a.value ^ b.value)};
    }
    // Characteristic two.
    static constexpr Element sub(Element a, Element b) noexcept { return add(a, b); }

    Element mul(Element a, Element b) const noexcept
    {
        if (a.is_zero() || b.is_zero())
            return Element{};
        return Element{exp_[log_[a.value] + log_[b.value]]};
    }

    /// Multiplicative inverse. Throws DomainError for zero.
    Element inv(Element a) const;

    Element div(Element a, Element b) const { return mul(a, inv(b)); }

    /// dst[i] += c * src[i] over the field; the spans must have equal length.
    void axpy(std::span<Element> dst, Element c, std::span<const Element> src) const;

    /// v[i] *= c
    void scale(std::span<Element> v, Element c) const;

    /// Uniform over the whole field, zero included.
    Element sample_uniform(RandomStream& rng) const;

    /// Uniform over [1, q).
    Element sample_uniform_nonzero(RandomStream& rng) const;

    /// Zero with probability p, otherwise uniform over [1, q).
    Element sample_omega(double p, RandomStream& rng) const;

  private:
    std::uint32_t q_;
    unsigned degree_;
    std::uint32_t polynomial_;
    std::vector<std::uint16_t> exp_; // 2(q-1) entries so log sums need no reduction
    std::vector<std::uint32_t> log_;
};

/// Carry-less product of a and b reduced modulo `polynomial`. Slow reference
/// used to build the tables and by tests.
std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t polynomial);

/// Packs raw bytes into m-bit field symbols (little-endian bit order, zero-padded).
std::vector<Element> pack_bytes(const Field& field, std::span<const std::uint8_t> bytes);

/// Inverse of pack_bytes; `byte_count` trims the padding.
std::vector<std::uint8_t> unpack_bytes(const Field& field, std::span<const Element> symbols, std::size_t byte_count);

} // namespace mmnc::gf
