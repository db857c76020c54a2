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
#include "mmtrack/rng.hpp"

#include <cstddef>
#include <vector>

namespace mmtrack {

// Slow-varying cluster parameters: AoA, AoD (radians) and real nonnegative path gain.
struct ClusterParams {
    double aoa = 0.0;
    double aod = 0.0;
    double gain = 1.0;

    void validate() const;
};

// Fast per-frame ray parameters. All three vectors have length R.
struct RayParams {
    std::vector<double> offsets_aoa;
    std::vector<double> offsets_aod;
    std::vector<double> phases;

    std::size_t num_rays() const { return phases.size(); }
    void validate() const;

    // R rays with zero offsets and the given phases.
    static RayParams coherent(std::vector<double> phases);
};

// Intra-cluster angular spread. sigma_ras / sigma_tas are Gaussian standard deviations
// in radians. A cluster with both spreads zero is line of sight and always carries a
// single ray, whatever num_rays says.
struct SpreadModel {
    double sigma_ras = 0.0;
    double sigma_tas = 0.0;
    std::size_t num_rays = 1;

    static SpreadModel line_of_sight() { return {0.0, 0.0, 1}; }

    bool is_line_of_sight() const { return sigma_ras == 0.0 && sigma_tas == 0.0; }
    std::size_t effective_rays() const { return is_line_of_sight() ? 1 : num_rays; }
    void validate() const;
};

// Draws offsets i.i.d. N(0, sigma^2) and phases uniform on (-pi, pi]. Per ray the draw
// order is (aoa offset, aod offset, phase).
RayParams sample_rays(const SpreadModel &model, RngStream &rng);

// H = g / sqrt(R) * sum_r exp(j psi_r) a_rx(aoa + d_aoa_r) a_tx(aod + d_aod_r)^H
// Throws DomainError naming the ray whose composite angle leaves [-pi/2, pi/2].
CMat assemble_channel(const ClusterParams &cluster, const RayParams &rays,
                      const ArraySpec &rx, const ArraySpec &tx);

// Composite ray angles, validated. Shared by the channel and sounding paths.
double ray_aoa(const ClusterParams &cluster, const RayParams &rays, std::size_t r);
double ray_aod(const ClusterParams &cluster, const RayParams &rays, std::size_t r);

} // namespace mmtrack
