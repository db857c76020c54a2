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

#include <span>
#include <vector>

namespace mmtrack::harness {

struct CcdfPoint {
    double threshold = 0.0;
    double fraction = 0.0; // P(X >= threshold)
};

// Exact empirical tail fractions at each grid value. Throws ConfigError on empty samples.
std::vector<CcdfPoint> ccdf(std::span<const double> samples, std::span<const double> grid);

// Grid from floor(min/step)*step to ceil(max/step)*step inclusive.
std::vector<double> ccdf_grid(std::span<const double> samples, double step);

// Sample quantile with linear interpolation between order statistics (q in [0, 1]).
double quantile(std::vector<double> samples, double q);

} // namespace mmtrack::harness
