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

#include "mmtrack/mobility.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mmtrack::harness {

enum class ExperimentKind { CrlbSweep, GainCurve, TrackSim };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

// One piecewise-constant mobility phase.
struct MobilitySegment {
    double duration_s = 0.0;
    Vec2 velocity;               // m/s
    double rotation_deg_s = 0.0; // deg/s
};

// All inputs of one harness run. Angles are in degrees here and converted to radians
// at the module boundary.
struct ScenarioConfig {
    ExperimentKind experiment = ExperimentKind::CrlbSweep;

    std::size_t num_rx = 32;
    std::size_t num_tx = 32;
    std::vector<double> snr_db;
    std::vector<std::size_t> training_slots;
    std::vector<double> sigma_ras_deg;
    double sigma_tas_deg = 0.0;
    std::size_t num_rays = 10;
    std::vector<double> beam_widths_deg;
    std::vector<double> phi_eps_deg;
    std::size_t trials = 1;
    std::optional<std::uint64_t> seed;

    // crlb-sweep
    std::size_t crlb_draws = 0; // 0: same as trials
    double cluster_angle_limit_deg = 60.0;
    std::size_t sweep_ml_iters = 30;
    double ml_init_perturb_deg = 0.5;

    // gain-curve
    std::size_t gain_mc_draws = 100000;

    // trackers
    double ml_window_deg = 3.0;
    double ml_grid_deg = 0.1;
    std::size_t ml_inner_iters = 3;
    double sector_width_deg = 10.0;
    std::size_t probe_radius = 1;

    // track-sim
    double frame_period_s = 0.01;
    PathMode mobility_mode = PathMode::Los;
    std::vector<MobilitySegment> mobility_segments;
    Vec2 bs_position{-50.0, 0.0};
    Vec2 ue_position{0.0, 0.0};
    Vec2 scatterer_position{0.0, -5.0};
    std::optional<double> ue_orientation_deg; // default: UE broadside faces the anchor
    std::size_t trace_trials = 1;
    double ccdf_step_db = 0.25;

    // Per-experiment defaults (grids, trial counts, trajectory).
    static ScenarioConfig defaults(ExperimentKind kind);

    // Throws ConfigError.
    void validate() const;

    // Stable text form of every field (one key = value per line, sorted by declaration).
    std::string canonical() const;

    // FNV-1a 64 of canonical(), 16 hex digits.
    std::string hash() const;
};

// Parses the key = value format on top of defaults(kind). Unknown or repeated keys,
// malformed numbers and an 'experiment' value different from kind are ConfigErrors.
ScenarioConfig parse_config(std::string_view text, ExperimentKind kind);
ScenarioConfig load_config(const std::string &path, ExperimentKind kind);

} // namespace mmtrack::harness
