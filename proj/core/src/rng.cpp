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

#include "mmtrack/rng.hpp"

#include <numbers>

namespace mmtrack {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = splitmix64(parent);
    for (auto k : keys)
        h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
    return h;
}

std::uint64_t tag_hash(std::string_view tag)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : tag)
    {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

double RngStream::phase()
{
    // pi - [0, 2pi) lands on (-pi, pi]
    return std::numbers::pi - 2.0 * std::numbers::pi * uniform();
}

} // namespace mmtrack
