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

#include "mmtrack/channel.hpp"

#include <cstddef>
#include <optional>

namespace mmtrack {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

enum class PathMode { Los, Nlos };

// 2-D kinematic state. The BS array broadside points along +x; UE orientation is the
// broadside direction of the UE array measured from +x.
struct MobilityState {
    Vec2 ue_position;
    Vec2 ue_velocity;          // m/s
    double ue_orientation = 0.0;      // rad, kept in (-pi, pi]
    double ue_rotation_rate = 0.0;    // rad/s
    Vec2 bs_position;
    Vec2 scatterer_position;   // NLOS only
    PathMode mode = PathMode::Los;

    // Point the cluster arrives from: the BS (LOS) or the scatterer (NLOS).
    Vec2 anchor() const { return mode == PathMode::Los ? bs_position : scatterer_position; }
    void validate() const;
};

// Wraps to (-pi, pi].
double wrap_angle(double angle);

// Constant-velocity, constant-rotation update. Any finite dt is accepted (negative dt
// runs the segment backwards). Throws DomainError if the UE ends up within 0.1 m of
// the BS or scatterer.
MobilityState step(const MobilityState &state, double dt);

// Geometric AoA/AoD. The optional frame index is only used in the field-of-view error.
ClusterParams cluster_params(const MobilityState &state, double gain,
                             std::optional<std::size_t> frame = std::nullopt);

} // namespace mmtrack
