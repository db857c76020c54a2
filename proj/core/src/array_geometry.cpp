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

#include "mmtrack/array_geometry.hpp"
#include "mmtrack/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mmtrack {

void ArraySpec::validate() const
{
    if (num_elements < 1)
        throw ConfigError("ArraySpec: num_elements must be at least 1");
}

bool angle_in_domain(double angle)
{
    constexpr double half_pi = std::numbers::pi / 2.0;
    return std::isfinite(angle) && angle >= -half_pi && angle <= half_pi;
}

void check_angle(double angle, const char *label)
{
    if (!angle_in_domain(angle))
        throw DomainError(std::string(label) + " = " + std::to_string(angle) +
                          " rad is outside [-pi/2, pi/2]");
}

CVec steering_vector(double angle, const ArraySpec &spec)
{
    check_angle(angle);
    spec.validate();
    const double u = std::numbers::pi * std::sin(angle);
    CVec a(static_cast<Eigen::Index>(spec.num_elements));
    for (Eigen::Index k = 0; k < a.size(); ++k)
        a(k) = std::polar(1.0, u * static_cast<double>(k));
    return a;
}

CVec steering_derivative(double angle, const ArraySpec &spec)
{
    CVec d = steering_vector(angle, spec);
    const double c = std::numbers::pi * std::cos(angle);
    for (Eigen::Index k = 0; k < d.size(); ++k)
        d(k) *= cdouble(0.0, c * static_cast<double>(k));
    return d;
}

} // namespace mmtrack
