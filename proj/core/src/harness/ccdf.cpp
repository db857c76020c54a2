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
#include "mmtrack/harness/ccdf.hpp"
#include "mmtrack/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mmtrack::harness {

std::vector<CcdfPoint> ccdf(std::span<const double> samples, std::span<const double> grid)
{
    if (samples.empty())
        throw ConfigError("ccdf: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    std::vector<CcdfPoint> out;
    out.reserve(grid.size());
    for (double x : grid)
    {
        const auto below = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
        out.push_back({x, (n - static_cast<double>(below)) / n});
    }
    return out;
}

std::vector<double> ccdf_grid(std::span<const double> samples, double step)
{
    if (samples.empty())
        throw ConfigError("ccdf_grid: no samples");
    if (!(step > 0.0))
        throw ConfigError("ccdf_grid: step must be positive");
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const long lo = static_cast<long>(std::floor(*lo_it / step));
    const long hi = static_cast<long>(std::ceil(*hi_it / step));
    std::vector<double> grid;
    for (long k = lo; k <= hi; ++k)
        grid.push_back(static_cast<double>(k) * step);
    return grid;
}

double quantile(std::vector<double> samples, double q)
{
    if (samples.empty())
        throw ConfigError("quantile: no samples");
    std::sort(samples.begin(), samples.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(samples.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= samples.size())
        return samples.back();
    return samples[i] + frac * (samples[i + 1] - samples[i]);
}

} // namespace mmtrack::harness
