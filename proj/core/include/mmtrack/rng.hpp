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
#include <initializer_list>
#include <random>
#include <string_view>

namespace mmtrack {

// Counter-based seed derivation. A child seed is a splitmix64 hash chain over the
// parent seed and a list of integer keys, so inserting new grid points or trials
// never shifts the streams of existing ones.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> keys);

// FNV-1a of a tag string, for readable stream labels ("rays", "noise", ...).
std::uint64_t tag_hash(std::string_view tag);

// One independent random stream. Owned by a single trial; not shared across threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double normal(double stddev)
    {
        if (stddev == 0.0)
            return 0.0;
        return std::normal_distribution<double>(0.0, stddev)(engine_);
    }

    // Uniform on [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform phase on (-pi, pi].
    double phase();

    std::uint64_t bits() { return engine_(); }

    // Child stream keyed by (this seed, keys); does not advance this stream.
    RngStream child(std::initializer_list<std::uint64_t> keys) const
    {
        return RngStream(derive_seed(seed_, keys));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace mmtrack
