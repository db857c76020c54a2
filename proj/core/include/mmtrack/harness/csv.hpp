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
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mmtrack::harness {

// In-memory RFC-4180 table (CRLF line ends, quoting only where needed).
class CsvTable {
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    const std::vector<std::string> &header() const { return header_; }
    const std::vector<std::vector<std::string>> &rows() const { return rows_; }

    // Throws ConfigError if the cell count differs from the header.
    void add_row(std::vector<std::string> cells);

    std::string str() const;
    void write(const std::string &path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// 9 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double value);
std::string format_integer(std::uint64_t value);

// 10 log10(x), clamped to -90 dB below 1e-9 linear.
double to_db(double linear);

std::string csv_escape(std::string_view field);

} // namespace mmtrack::harness
