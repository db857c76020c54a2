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
#include "mmtrack/sounding.hpp"
#include "mmtrack/errors.hpp"

#include <cmath>
#include <string>

namespace mmtrack {

namespace {

void check_unit_columns(const CMat &m, const char *name)
{
    for (Eigen::Index c = 0; c < m.cols(); ++c)
    {
        const double norm = m.col(c).norm();
        if (std::abs(norm - 1.0) > 1e-12)
            throw ConfigError(std::string("TrainingSet: ") + name + " column " + std::to_string(c) +
                              " has norm " + std::to_string(norm) + ", expected 1");
    }
}

} // namespace

void TrainingSet::validate() const
{
    if (combiners.cols() < 1)
        throw ConfigError("TrainingSet: at least one slot is required");
    if (combiners.cols() != precoders.cols())
        throw ConfigError("TrainingSet: combiner and precoder slot counts differ");
    check_unit_columns(combiners, "combiner");
    check_unit_columns(precoders, "precoder");
}

TrainingSet TrainingSet::head(std::size_t count) const
{
    if (count < 1 || count > num_slots())
        throw ConfigError("TrainingSet::head: slot count out of range");
    const auto n = static_cast<Eigen::Index>(count);
    return {combiners.leftCols(n), precoders.leftCols(n)};
}

TrainingSet TrainingSet::single(const CVec &combiner, const CVec &precoder)
{
    TrainingSet t{combiner, precoder};
    return t;
}

NoiseModel NoiseModel::from_snr_db(double snr_db, double gain)
{
    return {gain * gain / std::pow(10.0, snr_db / 10.0)};
}

void NoiseModel::validate() const
{
    if (!(sigma_n_sq >= 0.0) || !std::isfinite(sigma_n_sq))
        throw ConfigError("NoiseModel: sigma_n_sq must be finite and nonnegative");
}

TrainingSet random_training(std::size_t num_slots, const ArraySpec &rx, const ArraySpec &tx,
                            RngStream &rng)
{
    if (num_slots < 1)
        throw ConfigError("random_training: at least one slot is required");
    rx.validate();
    tx.validate();
    const auto M = static_cast<Eigen::Index>(num_slots);
    TrainingSet t{CMat(static_cast<Eigen::Index>(rx.num_elements), M),
                  CMat(static_cast<Eigen::Index>(tx.num_elements), M)};

    auto fill = [&rng](auto column, double scale) {
        for (Eigen::Index k = 0; k < column.size(); ++k)
        {
            const std::uint64_t b = rng.bits();
            column(k) = cdouble((b & 1U) ? scale : -scale, (b & 2U) ? scale : -scale);
        }
    };
    const double s_rx = 1.0 / std::sqrt(2.0 * static_cast<double>(rx.num_elements));
    const double s_tx = 1.0 / std::sqrt(2.0 * static_cast<double>(tx.num_elements));
    for (Eigen::Index m = 0; m < M; ++m)
    {
        fill(t.combiners.col(m), s_rx);
        fill(t.precoders.col(m), s_tx);
    }
    return t;
}

CVec mean_response(const ClusterParams &cluster, const RayParams &rays, const TrainingSet &training)
{
    cluster.validate();
    rays.validate();
    training.validate();
    const ArraySpec rx = training.rx();
    const ArraySpec tx = training.tx();
    const std::size_t R = rays.num_rays();
    const double scale = cluster.gain / std::sqrt(static_cast<double>(R));

    CVec mu = CVec::Zero(training.combiners.cols());
    for (std::size_t r = 0; r < R; ++r)
    {
        // (w_m^H a_rx) and conj(f_m^H a_tx) = a_tx^H f_m
        const CVec rx_proj = training.combiners.adjoint() * steering_vector(ray_aoa(cluster, rays, r), rx);
        const CVec tx_proj = (training.precoders.adjoint() * steering_vector(ray_aod(cluster, rays, r), tx)).conjugate();
        mu += (scale * std::polar(1.0, rays.phases[r])) * rx_proj.cwiseProduct(tx_proj);
    }
    return mu;
}

CVec complex_noise(std::size_t length, double sigma_n_sq, RngStream &rng)
{
    const double s = std::sqrt(sigma_n_sq / 2.0);
    CVec n(static_cast<Eigen::Index>(length));
    for (Eigen::Index m = 0; m < n.size(); ++m)
    {
        const double re = rng.normal(s);
        const double im = rng.normal(s);
        n(m) = cdouble(re, im);
    }
    return n;
}

CVec observe(const ClusterParams &cluster, const RayParams &rays, const TrainingSet &training,
             const NoiseModel &noise, RngStream &rng)
{
    noise.validate();
    CVec y = mean_response(cluster, rays, training);
    if (noise.sigma_n_sq > 0.0)
        y += complex_noise(training.num_slots(), noise.sigma_n_sq, rng);
    return y;
}

} // namespace mmtrack
