// SPDX-License-Identifier: Apache-2.0
//
// mmtrack - mmWave cluster tracking analysis toolkit
// Copyright (C) 2026 The mmtrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "mmtrack/harness/csv.hpp"
#include "mmtrack/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace mmtrack::harness {

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw ConfigError("CsvTable: row has " + std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
}

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string CsvTable::str() const
{
    std::string out;
    auto line = [&out](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out += ',';
            out += csv_escape(cells[i]);
        }
        out += "\r\n";
    };
    line(header_);
    for (const auto &r : rows_)
        line(r);
    return out;
}

void CsvTable::write(const std::string &path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot open '" + path + "' for writing");
    const std::string text = str();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw ConfigError("failed writing '" + path + "'");
}

std::string format_number(double value)
{
    char buf[64];
    // to_chars is locale independent.
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
    if (ec != std::errc())
        return "nan";
    return std::string(buf, ptr);
}

std::string format_integer(std::uint64_t value)
{
    return std::to_string(value);
}

double to_db(double linear)
{
    if (!(linear >= 1e-9))
        return -90.0;
    return 10.0 * std::log10(linear);
}

} // namespace mmtrack::harness
