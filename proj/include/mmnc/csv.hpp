// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace mmnc::cli {

/// Shortest round-trip decimal form of a double ("nan"/"inf" for non-finite).
std::string format_double(double v);

/// One CSV file held in memory: `#`-prefixed metadata, a header row, data rows.
class CsvDocument
{
  public:
    explicit CsvDocument(std::vector<std::string> columns);

    void add_meta(std::string_view key, std::string_view value);

    class Row
    {
      public:
        Row& operator<<(std::string_view cell);
        Row& operator<<(const char* cell) { return *this << std::string_view(cell); }
        Row& operator<<(const std::string& cell) { return *this << std::string_view(cell); }
        Row& operator<<(double v);
        Row& operator<<(std::int64_t v);
        Row& operator<<(std::uint64_t v);
        Row& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
        Row& operator<<(unsigned v) { return *this << static_cast<std::uint64_t>(v); }

      private:
        friend class CsvDocument;
        std::vector<std::string> cells_;
    };

    /// Throws std::logic_error if the row width differs from the header.
    void add(Row row);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::string str() const;
    void write(const std::filesystem::path& path) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace mmnc::cli
