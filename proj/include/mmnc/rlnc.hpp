// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmnc/gf.hpp"
#include "mmnc/random.hpp"

namespace mmnc::rlnc {

using Payload = std::vector<gf::Element>;
using CoefficientRow = std::vector<gf::Element>;

/// Decoding was requested before the transfer matrix reached full rank.
class NotDecodable : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// k original packets of identical length.
class Generation
{
  public:
    /// Throws std::invalid_argument if `packets` is empty or lengths differ.
    explicit Generation(std::vector<Payload> packets);

    /// k zero-length packets. Useful when only coefficient rank matters.
    static Generation coefficients_only(std::size_t k);

    std::size_t size() const noexcept { return packets_.size(); }
    std::size_t payload_length() const noexcept { return packets_.front().size(); }
    const std::vector<Payload>& packets() const noexcept { return packets_; }
    const Payload& operator[](std::size_t i) const { return packets_[i]; }

  private:
    std::vector<Payload> packets_;
};

/// Encoding vector plus the matching linear combination of source payloads.
struct CodedPacket
{
    CoefficientRow coeffs;
    Payload payload;
};

/// sum_i coeffs[i] * packets[i]. All packets must share one length.
Payload combine(const gf::Field& field, std::span<const gf::Element> coeffs, std::span<const Payload> packets);

/// Intra-session coded packet: coefficients i.i.d. uniform over the whole
/// field; an all-zero vector is redrawn.
CodedPacket encode_intra(const gf::Field& field, const Generation& gen, RandomStream& rng);

/// Inter-session coded packet from a relay's received subset.
///
/// `payloads` is indexed by source; entries whose mask bit is false are
/// ignored. Coefficients are zero outside the mask and uniform nonzero inside.
/// Returns std::nullopt when the mask is empty (nothing to send).
std::optional<CodedPacket> encode_inter(const gf::Field& field, const std::vector<bool>& received,
                                        std::span<const Payload> payloads, RandomStream& rng);

/// Transfer matrix accumulated at a receiver, kept in reduced row-echelon form.
///
/// Rows are reduced on arrival, so rank is available after every packet and
/// the sources fall out directly once rank == dimension.
class Decoder
{
  public:
    Decoder(const gf::Field& field, std::size_t dimension, std::size_t payload_length = 0);

    /// Adds a packet; returns true iff it raised the rank.
    /// Throws std::invalid_argument on a coefficient or payload length mismatch.
    bool add(const CodedPacket& pkt);

    /// True iff `coeffs` lies in the row space received so far.
    bool in_span(std::span<const gf::Element> coeffs) const;

    /// True iff every unit vector e_i with mask[i] set lies in the row space,
    /// i.e. no combination of those sources can be innovative.
    bool covers(const std::vector<bool>& mask) const;

    std::size_t rank() const noexcept { return rows_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    bool complete() const noexcept { return rank() == dimension_; }

    /// The decoded source payloads. Throws NotDecodable while rank < dimension.
    std::vector<Payload> extract() const;

  private:
    struct Row
    {
        std::size_t pivot;
        CoefficientRow coeffs;
        Payload payload;
    };

    const gf::Field* field_;
    std::size_t dimension_;
    std::size_t payload_length_;
    std::vector<Row> rows_; // sorted by pivot
};

/// Rank over GF(q) by Gaussian elimination. Rows must be equally long.
std::size_t matrix_rank(const gf::Field& field, std::vector<CoefficientRow> rows);

} // namespace mmnc::rlnc
