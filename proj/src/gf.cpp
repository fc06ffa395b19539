// SPDX-License-Identifier: Apache-2.0

#include "mmnc/gf.hpp"

#include <bit>
#include <string>

namespace mmnc::gf {

namespace {

int poly_degree(std::uint32_t p)
{
    return p == 0 ? -1 : 31 - std::countl_zero(p);
}

std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m)
{
    const int dm = poly_degree(m);
    for (int da = poly_degree(a); da >= dm; da = poly_degree(a))
        a ^= m << (da - dm);
    return a;
}

// Multiplicative order of a nonzero element, by repeated multiplication.
std::uint32_t element_order(std::uint32_t g, std::uint32_t polynomial)
{
    std::uint32_t x = g;
    std::uint32_t order = 1;
    while (x != 1)
    {
        x = clmul_mod(x, g, polynomial);
        ++order;
    }
    return order;
}

} // namespace

std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t polynomial)
{
    std::uint64_t product = 0;
    for (std::uint64_t aa = a; b != 0; b >>= 1, aa <<= 1)
        if (b & 1U)
            product ^= aa;
    const int dm = poly_degree(polynomial);
    auto degree64 = [](std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); };
    for (int d = degree64(product); d >= dm; d = degree64(product))
        product ^= static_cast<std::uint64_t>(polynomial) << (d - dm);
    return static_cast<std::uint32_t>(product);
}

bool is_irreducible(std::uint32_t poly)
{
    const int d = poly_degree(poly);
    if (d < 1)
        return false;
    if (d == 1)
        return true;
    // Any factorization has a factor of degree <= d/2.
    for (std::uint32_t f = 2; poly_degree(f) <= d / 2; ++f)
        if (poly_mod(poly, f) == 0)
            return false;
    return true;
}

std::uint32_t default_polynomial(unsigned degree)
{
    // Primitive polynomials; x is a generator of the multiplicative group.
    static constexpr std::uint32_t table[17] = {
        0,       0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,   0x11D,
        0x211,   0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
    };
    if (degree < 1 || degree > 16)
        throw std::invalid_argument("field degree must be in [1, 16], got " + std::to_string(degree));
    return table[degree];
}

namespace {

unsigned checked_degree(std::uint32_t q)
{
    if (q < 2 || q > 65536 || !std::has_single_bit(q))
        throw std::invalid_argument("field size must be a power of two in [2, 65536], got " + std::to_string(q));
    return static_cast<unsigned>(std::countr_zero(q));
}

} // namespace

Field::Field(std::uint32_t q) : Field(q, default_polynomial(checked_degree(q))) {}

Field::Field(std::uint32_t q, std::uint32_t polynomial)
    : q_(q), degree_(checked_degree(q)), polynomial_(polynomial)
{
    if (poly_degree(polynomial) != static_cast<int>(degree_))
        throw std::invalid_argument("reduction polynomial degree does not match field size");
    if (!is_irreducible(polynomial))
        throw std::invalid_argument("reduction polynomial is reducible over GF(2)");

    const std::uint32_t order = q_ - 1;
    std::uint32_t generator = 1;
    if (order > 1)
    {
        generator = 2;
        while (element_order(generator, polynomial_) != order)
            ++generator;
    }

    exp_.assign(2 * static_cast<std::size_t>(order), 0);
    log_.assign(q_, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order; ++i)
    {
        exp_[i] = static_cast<std::uint16_t>(x);
        exp_[i + order] = static_cast<std::uint16_t>(x);
        log_[x] = i;
        x = clmul_mod(x, generator, polynomial_);
    }
}

Element Field::element(std::uint32_t v) const
{
    if (v >= q_)
        throw DomainError("value " + std::to_string(v) + " outside GF(" + std::to_string(q_) + ")");
    return Element{static_cast<std::uint16_t>(v)};
}

Element Field::inv(Element a) const
{
    if (a.is_zero())
        throw DomainError("zero has no multiplicative inverse");
    const std::uint32_t order = q_ - 1;
    return Element{exp_[(order - log_[a.value]) % order]};
}

void Field::axpy(std::span<Element> dst, Element c, std::span<const Element> src) const
{
    if (dst.size() != src.size())
        throw std::invalid_argument("axpy: length mismatch");
    if (c.is_zero())
        return;
    const std::uint32_t lc = log_[c.value];
    for (std::size_t i = 0; i < dst.size(); ++i)
        if (!src[i].is_zero())
            dst[i].value ^= exp_[lc + log_[src[i].value]];
}

void Field::scale(std::span<Element> v, Element c) const
{
    for (auto& e : v)
        e = mul(e, c);
}

Element Field::sample_uniform(RandomStream& rng) const
{
    return Element{static_cast<std::uint16_t>(rng.uniform_index(q_))};
}

Element Field::sample_uniform_nonzero(RandomStream& rng) const
{
    return Element{static_cast<std::uint16_t>(1 + rng.uniform_index(q_ - 1))};
}

Element Field::sample_omega(double p, RandomStream& rng) const
{
    if (rng.bernoulli(p))
        return Element{};
    return sample_uniform_nonzero(rng);
}

std::vector<Element> pack_bytes(const Field& field, std::span<const std::uint8_t> bytes)
{
    const unsigned m = field.degree();
    const std::size_t bits = bytes.size() * 8;
    std::vector<Element> out((bits + m - 1) / m);
    for (std::size_t b = 0; b < bits; ++b)
        if (bytes[b / 8] >> (b % 8) & 1U)
            out[b / m].value |= static_cast<std::uint16_t>(1U << (b % m));
    return out;
}

std::vector<std::uint8_t> unpack_bytes(const Field& field, std::span<const Element> symbols, std::size_t byte_count)
{
    const unsigned m = field.degree();
    if (byte_count * 8 > symbols.size() * m)
        throw std::invalid_argument("unpack_bytes: not enough symbols for requested byte count");
    std::vector<std::uint8_t> out(byte_count);
    for (std::size_t b = 0; b < byte_count * 8; ++b)
        if (symbols[b / m].value >> (b % m) & 1U)
            out[b / 8] |= static_cast<std::uint8_t>(1U << (b % 8));
    return out;
}

} // namespace mmnc::gf
