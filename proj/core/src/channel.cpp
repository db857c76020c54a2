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
#include "mmtrack/channel.hpp"
#include "mmtrack/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mmtrack {

void ClusterParams::validate() const
{
    check_angle(aoa, "cluster aoa");
    check_angle(aod, "cluster aod");
    if (!(gain >= 0.0) || !std::isfinite(gain))
        throw ConfigError("ClusterParams: gain must be finite and nonnegative");
}

void RayParams::validate() const
{
    if (phases.empty())
        throw ConfigError("RayParams: at least one ray is required");
    if (offsets_aoa.size() != phases.size() || offsets_aod.size() != phases.size())
        throw ConfigError("RayParams: offset and phase vectors differ in length");
    for (double p : phases)
        if (!(p > -std::numbers::pi && p <= std::numbers::pi))
            throw ConfigError("RayParams: phase " + std::to_string(p) + " outside (-pi, pi]");
}

RayParams RayParams::coherent(std::vector<double> phases)
{
    RayParams rays;
    rays.offsets_aoa.assign(phases.size(), 0.0);
    rays.offsets_aod.assign(phases.size(), 0.0);
    rays.phases = std::move(phases);
    return rays;
}

void SpreadModel::validate() const
{
    if (!(sigma_ras >= 0.0) || !(sigma_tas >= 0.0) || !std::isfinite(sigma_ras) ||
        !std::isfinite(sigma_tas))
        throw ConfigError("SpreadModel: angular spreads must be finite and nonnegative");
    if (num_rays < 1)
        throw ConfigError("SpreadModel: num_rays must be at least 1");
}

RayParams sample_rays(const SpreadModel &model, RngStream &rng)
{
    model.validate();
    const std::size_t R = model.effective_rays();
    RayParams rays;
    rays.offsets_aoa.resize(R);
    rays.offsets_aod.resize(R);
    rays.phases.resize(R);
    for (std::size_t r = 0; r < R; ++r)
    {
        rays.offsets_aoa[r] = rng.normal(model.sigma_ras);
        rays.offsets_aod[r] = rng.normal(model.sigma_tas);
        rays.phases[r] = rng.phase();
    }
    return rays;
}

double ray_aoa(const ClusterParams &cluster, const RayParams &rays, std::size_t r)
{
    const double angle = cluster.aoa + rays.offsets_aoa[r];
    if (!angle_in_domain(angle))
        throw DomainError("ray " + std::to_string(r) + ": composite AoA " + std::to_string(angle) +
                          " rad is outside [-pi/2, pi/2]");
    return angle;
}

double ray_aod(const ClusterParams &cluster, const RayParams &rays, std::size_t r)
{
    const double angle = cluster.aod + rays.offsets_aod[r];
    if (!angle_in_domain(angle))
        throw DomainError("ray " + std::to_string(r) + ": composite AoD " + std::to_string(angle) +
                          " rad is outside [-pi/2, pi/2]");
    return angle;
}

CMat assemble_channel(const ClusterParams &cluster, const RayParams &rays,
                      const ArraySpec &rx, const ArraySpec &tx)
{
    cluster.validate();
    rays.validate();
    const std::size_t R = rays.num_rays();
    const double scale = cluster.gain / std::sqrt(static_cast<double>(R));

    CMat H = CMat::Zero(static_cast<Eigen::Index>(rx.num_elements),
                        static_cast<Eigen::Index>(tx.num_elements));
    for (std::size_t r = 0; r < R; ++r)
    {
        const CVec a_rx = steering_vector(ray_aoa(cluster, rays, r), rx);
        const CVec a_tx = steering_vector(ray_aod(cluster, rays, r), tx);
        H.noalias() += (scale * std::polar(1.0, rays.phases[r])) * a_rx * a_tx.adjoint();
    }
    return H;
}

} // namespace mmtrack
