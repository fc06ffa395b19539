// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmnc/gf.hpp"
#include "oracles.hpp"

using mmnc::RandomStream;
using mmnc::gf::Element;
using mmnc::gf::Field;

namespace {

Element e(std::uint16_t v)
{
    return Element{v};
}

} // namespace

TEST_CASE("GF(4) hand-reduced examples with x^2 + x + 1")
{
    const Field f(4, 0x7);
    CHECK(Field::add(e(1), e(2)) == e(3));
    CHECK(f.mul(e(2), e(2)) == e(3));
    CHECK(f.inv(e(2)) == e(3));
    CHECK(f.inv(e(1)) == e(1));
    CHECK(Field::add(e(0), e(3)) == e(3));
    CHECK(Field::add(e(2), e(2)) == e(0));
    CHECK(f.mul(e(1), e(3)) == e(3));
    CHECK(f.mul(e(0), e(3)) == e(0));
}

TEST_CASE("inverting zero is a domain error")
{
    const Field f(1024);
    CHECK_THROWS_AS(f.inv(e(0)), mmnc::gf::DomainError);
    CHECK_THROWS_AS(f.element(1024), mmnc::gf::DomainError);
}

TEST_CASE("construction validates size and polynomial")
{
    CHECK_THROWS_AS(Field(3), std::invalid_argument);
    CHECK_THROWS_AS(Field(1), std::invalid_argument);
    CHECK_THROWS_AS(Field(1U << 17), std::invalid_argument);
    CHECK_THROWS_AS(Field(4, 0x5), std::invalid_argument);   // x^2 + 1 = (x + 1)^2
    CHECK_THROWS_AS(Field(16, 0x7), std::invalid_argument);  // wrong degree
    CHECK_NOTHROW(Field(16, 0x19));                          // x^4 + x^3 + 1
    CHECK(Field(1024).polynomial() == 0x409);
    CHECK(Field(1024).degree() == 10);
}

TEST_CASE("default polynomials are irreducible and reducible ones are rejected")
{
    for (unsigned m = 1; m <= 16; ++m)
        CHECK(mmnc::gf::is_irreducible(mmnc::gf::default_polynomial(m)));
    CHECK_FALSE(mmnc::gf::is_irreducible(0x5));
    CHECK_FALSE(mmnc::gf::is_irreducible(0x11));  // x^4 + 1
    // Any product of two nonconstant polynomials is reducible.
    for (std::uint32_t a = 2; a < 32; ++a)
        for (std::uint32_t b = 2; b < 32; ++b)
        {
            std::uint32_t p = 0;
            for (unsigned i = 0; i < 6; ++i)
                if (b & (1U << i))
                    p ^= a << i;
            CHECK_FALSE(mmnc::gf::is_irreducible(p));
        }
}

TEST_CASE("table multiplication agrees with shift-and-add reference")
{
    for (std::uint32_t q : {2U, 4U, 16U, 256U})
    {
        const Field f(q);
        for (std::uint32_t a = 0; a < q; ++a)
            for (std::uint32_t b = 0; b < q; ++b)
                REQUIRE(f.mul(e(static_cast<std::uint16_t>(a)), e(static_cast<std::uint16_t>(b))).value ==
                        oracle::gf_mul(a, b, f.polynomial(), f.degree()));
    }
    const Field big(1024);
    RandomStream rng(11);
    for (int i = 0; i < 100000; ++i)
    {
        const auto a = static_cast<std::uint32_t>(rng.uniform_index(1024));
        const auto b = static_cast<std::uint32_t>(rng.uniform_index(1024));
        REQUIRE(big.mul(e(static_cast<std::uint16_t>(a)), e(static_cast<std::uint16_t>(b))).value ==
                oracle::gf_mul(a, b, 0x409, 10));
    }
}

TEST_CASE("field axioms on random triples")
{
    for (std::uint32_t q : {16U, 1024U, 65536U})
    {
        const Field f(q);
        RandomStream rng(q);
        for (int i = 0; i < 20000; ++i)
        {
            const auto a = f.sample_uniform(rng);
            const auto b = f.sample_uniform(rng);
            const auto c = f.sample_uniform(rng);
            REQUIRE(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
            REQUIRE(f.mul(a, b) == f.mul(b, a));
            REQUIRE(Field::add(a, b) == Field::add(b, a));
            REQUIRE(Field::add(a, Field::add(b, c)) == Field::add(Field::add(a, b), c));
            REQUIRE(f.mul(a, Field::add(b, c)) == Field::add(f.mul(a, b), f.mul(a, c)));
            REQUIRE(f.mul(a, Field::one()) == a);
            REQUIRE(Field::add(a, Field::zero()) == a);
            REQUIRE(Field::add(a, a) == Field::zero());
            if (!b.is_zero())
                REQUIRE(f.mul(f.div(a, b), b) == a);
        }
    }
}

TEST_CASE("every nonzero element has an inverse")
{
    for (std::uint32_t q : {2U, 4U, 8U, 16U, 32U, 64U, 128U, 256U, 1024U})
    {
        const Field f(q);
        for (std::uint32_t a = 1; a < q; ++a)
            REQUIRE(f.mul(e(static_cast<std::uint16_t>(a)), f.inv(e(static_cast<std::uint16_t>(a)))) == Field::one());
    }
}

TEST_CASE("axpy and scale act elementwise")
{
    const Field f(256);
    RandomStream rng(5);
    std::vector<Element> x(33), y(33);
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        x[i] = f.sample_uniform(rng);
        y[i] = f.sample_uniform(rng);
    }
    const auto c = f.sample_uniform_nonzero(rng);
    auto z = y;
    f.axpy(z, c, x);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(z[i] == Field::add(y[i], f.mul(c, x[i])));
    auto w = x;
    f.scale(w, c);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(w[i] == f.mul(c, x[i]));
    std::vector<Element> shorter(3);
    CHECK_THROWS_AS(f.axpy(shorter, c, x), std::invalid_argument);
}

TEST_CASE("sample_uniform_nonzero: GF(2) is always one, GF(1024) passes a frequency test")
{
    RandomStream rng(99);
    const Field two(2);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(two.sample_uniform_nonzero(rng) == Field::one());

    const Field f(1024);
    const int draws = 1'000'000;
    std::vector<int> counts(1024, 0);
    for (int i = 0; i < draws; ++i)
        ++counts[f.sample_uniform_nonzero(rng).value];
    CHECK(counts[0] == 0);
    const double expected = draws / 1023.0;
    const double sigma = std::sqrt(draws * (1.0 / 1023.0) * (1.0 - 1.0 / 1023.0));
    double chi2 = 0.0;
    for (int v = 1; v < 1024; ++v)
    {
        REQUIRE(std::abs(counts[v] - expected) < 5.0 * sigma);
        chi2 += (counts[v] - expected) * (counts[v] - expected) / expected;
    }
    // 1022 degrees of freedom: mean 1022, sd ~45; 6 sd is a loose cut.
    CHECK(chi2 < 1022.0 + 6.0 * std::sqrt(2.0 * 1022.0));
}

TEST_CASE("sample_omega: degenerate masses and GF(4) frequencies at p = 0.5")
{
    RandomStream rng(7);
    const Field f(4);
    for (int i = 0; i < 1000; ++i)
    {
        REQUIRE(f.sample_omega(1.0, rng) == Field::zero());
        REQUIRE_FALSE(f.sample_omega(0.0, rng).is_zero());
    }
    const int draws = 1'000'000;
    std::vector<int> counts(4, 0);
    for (int i = 0; i < draws; ++i)
        ++counts[f.sample_omega(0.5, rng).value];
    const std::vector<double> probs{0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6};
    for (int v = 0; v < 4; ++v)
    {
        const double sigma = std::sqrt(draws * probs[v] * (1 - probs[v]));
        CHECK(std::abs(counts[v] - draws * probs[v]) < 5.0 * sigma);
    }
}

TEST_CASE("byte packing round-trips for every field degree")
{
    RandomStream rng(3);
    for (std::uint32_t q : {2U, 16U, 256U, 1024U, 65536U})
    {
        const Field f(q);
        for (std::size_t len : {0U, 1U, 7U, 64U, 129U})
        {
            std::vector<std::uint8_t> bytes(len);
            for (auto& b : bytes)
                b = static_cast<std::uint8_t>(rng.uniform_index(256));
            const auto symbols = mmnc::gf::pack_bytes(f, bytes);
            CHECK(symbols.size() == (len * 8 + f.degree() - 1) / f.degree());
            for (auto s : symbols)
                REQUIRE(s.value < q);
            CHECK(mmnc::gf::unpack_bytes(f, symbols, len) == bytes);
        }
    }
}
