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

#include "mmtrack/array_geometry.hpp"
#include "mmtrack/channel.hpp"
#include "mmtrack/rng.hpp"
#include "mmtrack/sounding.hpp"

#include <cstddef>
#include <vector>

namespace mmtrack {

// ---------------------------------------------------------------------------
// Maximum-likelihood tracking
// ---------------------------------------------------------------------------

struct MlTrackerState {
    cdouble gain_est{1.0, 0.0};
    double aoa_est = 0.0;
    double aod_est = 0.0;
    std::size_t frame_index = 0;
};

// Angle search around the previous estimate: a square grid of +-window with the given
// step, followed by one quadratic interpolation per axis through the best grid point.
struct MlSearch {
    double window = 3.0 * 3.14159265358979323846 / 180.0;
    double grid_step = 0.1 * 3.14159265358979323846 / 180.0;

    void validate() const;
};

// s = diag(W^H a_rx(aoa) a_tx(aod)^H F)
CVec ml_template(const TrainingSet &training, double aoa, double aod);

// ||y - gain * s(aoa, aod)||^2
double ml_objective(const CVec &y, const TrainingSet &training, cdouble gain, double aoa, double aod);

// Least-squares gain s^H y / s^H s. Throws NumericalError if s vanishes.
cdouble ml_gain_step(const CVec &y, const TrainingSet &training, double aoa_est, double aod_est);

struct AngleStep {
    double aoa = 0.0;
    double aod = 0.0;
    double objective = 0.0;
    bool clipped = false; // part of the window fell outside [-pi/2, pi/2]
};

// Grid minimization of ml_objective over (aoa, aod) with the gain held fixed. The
// previous estimate is a grid point and wins ties, so the returned objective never
// exceeds the objective at (prev_aoa, prev_aod).
AngleStep ml_angle_step(const CVec &y, const TrainingSet &training, cdouble gain_est,
                        double prev_aoa, double prev_aod, const MlSearch &search = {});

struct MlFrameResult {
    MlTrackerState state;
    std::vector<double> residuals; // objective after every half step
    bool clipped = false;
};

// num_inner_iters alternations of (gain step, angle step), closed by a final gain
// step so the stored gain matches the stored angles.
MlFrameResult ml_track_frame(const MlTrackerState &state, const CVec &y, const TrainingSet &training,
                             std::size_t num_inner_iters = 3, const MlSearch &search = {});

// ---------------------------------------------------------------------------
// Sector tracking
// ---------------------------------------------------------------------------

// Fixed sectors tiling [-pi/2, pi/2]. Column s of weights is the synthesized beam for
// sector s. If beam_width does not divide pi the last sector is shrunk to fit.
struct SectorCodebook {
    double beam_width = 0.0;
    std::vector<double> centers;
    std::vector<double> widths;
    CMat weights;

    std::size_t size() const { return centers.size(); }
};

SectorCodebook build_sector_codebook(double beam_width, const ArraySpec &spec);

struct SectorTrackerState {
    std::size_t rx_sector = 0;
    std::size_t tx_sector = 0;
    double last_metric = 0.0;
};

// Index of the sector whose interval contains the angle (boundaries go to the lower sector).
std::size_t sector_of(const SectorCodebook &codebook, double angle);

// Measures every pair within +-probe_radius sectors of the current pair, one slot each,
// and moves to the pair with the largest |y|^2. Ties go to the incumbent pair, then to
// the lower (rx, tx) index.
SectorTrackerState sector_track_frame(const SectorTrackerState &state, const SectorCodebook &rx_codebook,
                                      const SectorCodebook &tx_codebook, const ClusterParams &cluster,
                                      const RayParams &rays, const NoiseModel &noise,
                                      std::size_t probe_radius, RngStream &rng);

} // namespace mmtrack
