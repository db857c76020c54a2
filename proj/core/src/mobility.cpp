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
#include "mmtrack/mobility.hpp"
#include "mmtrack/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mmtrack {

namespace {

constexpr double kMinSeparation = 0.1;

double distance(Vec2 a, Vec2 b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double bearing(Vec2 from, Vec2 to)
{
    return std::atan2(to.y - from.y, to.x - from.x);
}

} // namespace

double wrap_angle(double angle)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::remainder(angle, two_pi); // [-pi, pi]
    if (w <= -std::numbers::pi)
        w += two_pi;
    return w;
}

void MobilityState::validate() const
{
    if (distance(ue_position, bs_position) <= kMinSeparation)
        throw DomainError("mobility: UE within 0.1 m of the BS");
    if (mode == PathMode::Nlos && distance(ue_position, scatterer_position) <= kMinSeparation)
        throw DomainError("mobility: UE within 0.1 m of the scatterer");
}

MobilityState step(const MobilityState &state, double dt)
{
    if (!std::isfinite(dt))
        throw ConfigError("mobility step: dt must be finite");
    MobilityState next = state;
    next.ue_position.x += state.ue_velocity.x * dt;
    next.ue_position.y += state.ue_velocity.y * dt;
    next.ue_orientation = wrap_angle(state.ue_orientation + state.ue_rotation_rate * dt);
    next.validate();
    return next;
}

ClusterParams cluster_params(const MobilityState &state, double gain, std::optional<std::size_t> frame)
{
    state.validate();
    const Vec2 anchor = state.anchor();
    ClusterParams c;
    c.aoa = wrap_angle(bearing(state.ue_position, anchor) - state.ue_orientation);
    c.aod = wrap_angle(bearing(state.bs_position, state.mode == PathMode::Los ? state.ue_position : anchor));
    c.gain = gain;
    if (!angle_in_domain(c.aoa) || !angle_in_domain(c.aod))
    {
        std::string where = frame ? " at frame " + std::to_string(*frame) : std::string();
        throw DomainError("mobility: cluster leaves the array field of view" + where + " (AoA " +
                          std::to_string(c.aoa * 180.0 / std::numbers::pi) + " deg, AoD " +
                          std::to_string(c.aod * 180.0 / std::numbers::pi) + " deg)");
    }
    return c;
}

} // namespace mmtrack
