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
#include "mmtrack/sounding.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace mmtrack {

// Full parameter vector [aoa_c, aod_c, gain_c, d_aoa_1, d_aod_1, psi_1, ..., d_aoa_R, d_aod_R, psi_R].
// The first three entries are the cluster parameters of interest, the rest are ray
// nuisance parameters.
class ParamVector {
public:
    static constexpr Eigen::Index kAoa = 0;
    static constexpr Eigen::Index kAod = 1;
    static constexpr Eigen::Index kGain = 2;
    static constexpr Eigen::Index kClusterSize = 3;

    static Eigen::Index ray_aoa_index(std::size_t r) { return kClusterSize + 3 * static_cast<Eigen::Index>(r); }
    static Eigen::Index ray_aod_index(std::size_t r) { return ray_aoa_index(r) + 1; }
    static Eigen::Index ray_phase_index(std::size_t r) { return ray_aoa_index(r) + 2; }

    explicit ParamVector(Eigen::VectorXd values);
    ParamVector(const ClusterParams &cluster, const RayParams &rays);

    const Eigen::VectorXd &values() const { return values_; }
    Eigen::Index size() const { return values_.size(); }
    std::size_t num_rays() const { return static_cast<std::size_t>((values_.size() - kClusterSize) / 3); }

    ClusterParams cluster() const;
    RayParams rays() const;

private:
    Eigen::VectorXd values_;
};

// Analytic Jacobian d mu / d eta, M x (3 + 3R), of the noiseless sounding response.
CMat mean_jacobian(const ParamVector &eta, const TrainingSet &training);

// J_w = (2 / sigma_n^2) Re{ J_mu^H J_mu }. Throws ConfigError for sigma_n_sq <= 0.
Eigen::MatrixXd observation_fim(const ParamVector &eta, const TrainingSet &training, double sigma_n_sq);

// Diagonal prior information of the Gaussian angular offsets. Offsets with zero spread
// are not given an infinite prior; they are marked pinned and removed from the
// nuisance block instead. Ray phases are uniform and carry no prior information.
struct PriorFim {
    Eigen::MatrixXd matrix;
    std::vector<bool> pinned;

    std::size_t num_rays() const { return (pinned.size() - 3) / 3; }
};

PriorFim prior_fim(const SpreadModel &model);
PriorFim prior_fim(const SpreadModel &model, std::size_t num_rays);

struct ClusterEfim {
    Eigen::Matrix3d efim;
    double crlb_aoa = 0.0; // rad^2
    double crlb_aod = 0.0; // rad^2
    bool regularized = false;
};

// Schur complement of the nuisance block of (J_w + J_p) restricted to unpinned
// parameters. A numerically singular nuisance block gets a 1e-12 * trace diagonal
// floor and the result is flagged. Throws NumericalError if the 3x3 cluster EFIM is
// singular, naming the dominant null direction.
ClusterEfim efim_cluster(const Eigen::MatrixXd &j_obs, const PriorFim &j_prior);

struct FimBundle {
    Eigen::MatrixXd j_obs;
    PriorFim j_prior;
    Eigen::Matrix3d efim_cluster;
    double crlb_aoa = 0.0;
    double crlb_aod = 0.0;
    bool regularized = false;
};

FimBundle compute_fim_bundle(const ParamVector &eta, const TrainingSet &training,
                             const NoiseModel &noise, const SpreadModel &spread);

// One slice of a bound sweep. Cluster angles are drawn uniformly from
// [-limit, limit] with limit = min(cluster_angle_limit, pi/2 - 4 * max spread) unless a
// fixed cluster is given; training is quasi-omni random unless fixed.
struct CrlbScenario {
    ArraySpec rx{32};
    ArraySpec tx{32};
    std::size_t training_slots = 32;
    NoiseModel noise{1.0};
    SpreadModel spread;
    double gain = 1.0;
    double cluster_angle_limit = 1.0471975511965976; // 60 degrees
    std::optional<ClusterParams> fixed_cluster;
    std::optional<TrainingSet> fixed_training;
};

struct AveragedBound {
    double rmse_aoa = 0.0; // rad
    double rmse_aod = 0.0; // rad
    std::size_t draws = 0;
    std::size_t rejected = 0;
    std::size_t regularized = 0;
};

// Average of per-draw CRLB variances over fresh training and ray draws, square-rooted.
// Draw d uses streams derived from (seed, d, attempt); a failing draw is resampled
// with the next attempt and counted in 'rejected'. Result does not depend on workers.
AveragedBound averaged_crlb(const CrlbScenario &scenario, std::size_t num_draws,
                            std::uint64_t seed, unsigned workers = 1);

// The (cluster, rays, training) triple used by draw d / attempt k. Exposed so the ML
// sweep can evaluate estimators on the same realizations as the bound.
struct ScenarioDraw {
    ClusterParams cluster;
    RayParams rays;
    TrainingSet training;
};

ScenarioDraw draw_scenario(const CrlbScenario &scenario, std::uint64_t seed, std::size_t draw,
                           std::size_t attempt);

} // namespace mmtrack
