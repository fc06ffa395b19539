// SPDX-License-Identifier: Apache-2.0

#include "mmnc/rlnc.hpp"

#include <algorithm>

namespace mmnc::rlnc {

Generation::Generation(std::vector<Payload> packets) : packets_(std::move(packets))
{
    if (packets_.empty())
        throw std::invalid_argument("generation must hold at least one packet");
    const auto len = packets_.front().size();
    for (const auto& p : packets_)
        if (p.size() != len)
            throw std::invalid_argument("generation payloads must have identical length");
}

Generation Generation::coefficients_only(std::size_t k)
{
    return Generation(std::vector<Payload>(k));
}

Payload combine(const gf::Field& field, std::span<const gf::Element> coeffs, std::span<const Payload> packets)
{
    if (coeffs.size() != packets.size())
        throw std::invalid_argument("combine: coefficient count differs from packet count");
    Payload out(packets.empty() ? 0 : packets.front().size());
    for (std::size_t i = 0; i < packets.size(); ++i)
        field.axpy(out, coeffs[i], packets[i]);
    return out;
}

CodedPacket encode_intra(const gf::Field& field, const Generation& gen, RandomStream& rng)
{
    CodedPacket pkt;
    pkt.coeffs.resize(gen.size());
    bool nonzero = false;
    while (!nonzero)
    {
        for (auto& c : pkt.coeffs)
        {
            c = field.sample_uniform(rng);
            nonzero = nonzero || !c.is_zero();
        }
    }
    pkt.payload = combine(field, pkt.coeffs, gen.packets());
    return pkt;
}

std::optional<CodedPacket> encode_inter(const gf::Field& field, const std::vector<bool>& received,
                                        std::span<const Payload> payloads, RandomStream& rng)
{
    if (payloads.size() != received.size())
        throw std::invalid_argument("encode_inter: payload slots must match mask length");
    if (std::none_of(received.begin(), received.end(), [](bool b) { return b; }))
        return std::nullopt;

    CodedPacket pkt;
    pkt.coeffs.assign(received.size(), gf::Element{});
    std::size_t length = 0;
    bool sized = false;
    for (std::size_t i = 0; i < received.size(); ++i)
    {
        if (!received[i])
            continue;
        if (!sized)
        {
            length = payloads[i].size();
            sized = true;
        }
        else if (payloads[i].size() != length)
            throw std::invalid_argument("encode_inter: received payloads differ in length");
        pkt.coeffs[i] = field.sample_uniform_nonzero(rng);
    }
    pkt.payload.assign(length, gf::Element{});
    for (std::size_t i = 0; i < received.size(); ++i)
        if (received[i])
            field.axpy(pkt.payload, pkt.coeffs[i], payloads[i]);
    return pkt;
}

Decoder::Decoder(const gf::Field& field, std::size_t dimension, std::size_t payload_length)
    : field_(&field), dimension_(dimension), payload_length_(payload_length)
{
    if (dimension == 0)
        throw std::invalid_argument("decoder dimension must be at least 1");
    rows_.reserve(dimension);
}

bool Decoder::add(const CodedPacket& pkt)
{
    if (pkt.coeffs.size() != dimension_)
        throw std::invalid_argument("coded packet has " + std::to_string(pkt.coeffs.size()) +
                                    " coefficients, decoder expects " + std::to_string(dimension_));
    if (pkt.payload.size() != payload_length_)
        throw std::invalid_argument("coded packet payload length does not match decoder");
    if (complete())
        return false;

    CoefficientRow v = pkt.coeffs;
    Payload w = pkt.payload;
    for (const auto& row : rows_)
    {
        const auto c = v[row.pivot];
        if (c.is_zero())
            continue;
        field_->axpy(v, c, row.coeffs);
        field_->axpy(w, c, row.payload);
    }

    const auto lead = std::find_if(v.begin(), v.end(), [](gf::Element e) { return !e.is_zero(); });
    if (lead == v.end())
        return false;
    const auto pivot = static_cast<std::size_t>(lead - v.begin());
    const auto norm = field_->inv(*lead);
    field_->scale(v, norm);
    field_->scale(w, norm);

    // Back-substitute so the new pivot column is zero in every other row.
    for (auto& row : rows_)
    {
        const auto c = row.coeffs[pivot];
        if (c.is_zero())
            continue;
        field_->axpy(row.coeffs, c, v);
        field_->axpy(row.payload, c, w);
    }

    const auto pos = std::lower_bound(rows_.begin(), rows_.end(), pivot,
                                      [](const Row& r, std::size_t p) { return r.pivot < p; });
    rows_.insert(pos, Row{pivot, std::move(v), std::move(w)});
    return true;
}

bool Decoder::in_span(std::span<const gf::Element> coeffs) const
{
    if (coeffs.size() != dimension_)
        throw std::invalid_argument("in_span: dimension mismatch");
    CoefficientRow v(coeffs.begin(), coeffs.end());
    for (const auto& row : rows_)
    {
        const auto c = v[row.pivot];
        if (!c.is_zero())
            field_->axpy(v, c, row.coeffs);
    }
    return std::all_of(v.begin(), v.end(), [](gf::Element e) { return e.is_zero(); });
}

bool Decoder::covers(const std::vector<bool>& mask) const
{
    if (mask.size() != dimension_)
        throw std::invalid_argument("covers: dimension mismatch");
    CoefficientRow unit(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i)
    {
        if (!mask[i])
            continue;
        std::fill(unit.begin(), unit.end(), gf::Element{});
        unit[i] = gf::Field::one();
        if (!in_span(unit))
            return false;
    }
    return true;
}

std::vector<Payload> Decoder::extract() const
{
    if (!complete())
        throw NotDecodable("transfer matrix has rank " + std::to_string(rank()) + " of " +
                           std::to_string(dimension_) + "; not decodable yet");
    // Full-rank RREF is the identity, so row i carries source i.
    std::vector<Payload> out;
    out.reserve(dimension_);
    for (const auto& row : rows_)
        out.push_back(row.payload);
    return out;
}

std::size_t matrix_rank(const gf::Field& field, std::vector<CoefficientRow> rows)
{
    if (rows.empty())
        return 0;
    const auto cols = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != cols)
            throw std::invalid_argument("matrix_rank: rows must have equal length");

    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col)
    {
        auto pivot = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                                  [col](const CoefficientRow& r) { return !r[col].is_zero(); });
        if (pivot == rows.end())
            continue;
        std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), pivot);
        auto& prow = rows[rank];
        field.scale(prow, field.inv(prow[col]));
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            field.axpy(rows[r], rows[r][col], prow);
        ++rank;
    }
    return rank;
}

} // namespace mmnc::rlnc
