// SPDX-License-Identifier: Apache-2.0

#include "mmnc/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace mmnc::cli {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

namespace {

std::string quote(std::string_view cell)
{
    if (cell.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(cell);
    std::string out = "\"";
    for (char c : cell)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

CsvDocument::CsvDocument(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvDocument::add_meta(std::string_view key, std::string_view value)
{
    meta_.emplace_back(key, value);
}

CsvDocument::Row& CsvDocument::Row::operator<<(std::string_view cell)
{
    cells_.push_back(quote(cell));
    return *this;
}

CsvDocument::Row& CsvDocument::Row::operator<<(double v)
{
    cells_.push_back(format_double(v));
    return *this;
}

CsvDocument::Row& CsvDocument::Row::operator<<(std::int64_t v)
{
    cells_.push_back(std::to_string(v));
    return *this;
}

CsvDocument::Row& CsvDocument::Row::operator<<(std::uint64_t v)
{
    cells_.push_back(std::to_string(v));
    return *this;
}

void CsvDocument::add(Row row)
{
    if (row.cells_.size() != columns_.size())
        throw std::logic_error("CSV row has " + std::to_string(row.cells_.size()) + " cells, header has " +
                               std::to_string(columns_.size()));
    rows_.push_back(std::move(row.cells_));
}

std::string CsvDocument::str() const
{
    std::string out;
    for (const auto& [k, v] : meta_)
        out += "# " + k + "=" + v + "\n";
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    std::vector<std::string> header;
    for (const auto& c : columns_)
        header.push_back(quote(c));
    line(header);
    for (const auto& r : rows_)
        line(r);
    return out;
}

void CsvDocument::write(const std::filesystem::path& path) const
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << str();
    if (!out)
        throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace mmnc::cli
