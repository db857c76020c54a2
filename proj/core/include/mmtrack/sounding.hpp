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

#include <cstddef>

namespace mmtrack {

// M training slots. Column m of combiners (N_rx x M) and precoders (N_tx x M) is the
// beam pair used in slot m. Every column has unit norm.
struct TrainingSet {
    CMat combiners;
    CMat precoders;

    std::size_t num_slots() const { return static_cast<std::size_t>(combiners.cols()); }
    ArraySpec rx() const { return {static_cast<std::size_t>(combiners.rows())}; }
    ArraySpec tx() const { return {static_cast<std::size_t>(precoders.rows())}; }

    // Throws ConfigError on shape mismatch or a column norm off by more than 1e-12 relative.
    void validate() const;

    // Slots [0, count) of this set.
    TrainingSet head(std::size_t count) const;

    static TrainingSet single(const CVec &combiner, const CVec &precoder);
};

// Post-combining noise power per slot.
struct NoiseModel {
    double sigma_n_sq = 0.0;

    static NoiseModel from_snr_db(double snr_db, double gain = 1.0);
    void validate() const;
};

// Quasi-omni training. Entries are {+-1 +-1j}/sqrt(2N). Slots are drawn in order, combiner
// column then precoder column, so the first K slots of an M-slot set drawn from a given
// stream equal the K-slot set drawn from the same stream.
TrainingSet random_training(std::size_t num_slots, const ArraySpec &rx, const ArraySpec &tx,
                            RngStream &rng);

// Noiseless response mu_m = w_m^H H f_m, evaluated as a direct sum over rays.
CVec mean_response(const ClusterParams &cluster, const RayParams &rays, const TrainingSet &training);

// mean_response plus i.i.d. CN(0, sigma_n^2) noise per slot.
CVec observe(const ClusterParams &cluster, const RayParams &rays, const TrainingSet &training,
             const NoiseModel &noise, RngStream &rng);

// CN(0, sigma_n^2) vector of the given length.
CVec complex_noise(std::size_t length, double sigma_n_sq, RngStream &rng);

} // namespace mmtrack
