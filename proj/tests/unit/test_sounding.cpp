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
#include "mmtrack/errors.hpp"
#include "mmtrack/sounding.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mmtrack;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// mu = diag(W^H H F) through the full channel matrix.
CVec matrix_response(const ClusterParams &c, const RayParams &rays, const TrainingSet &t)
{
    const CMat h = assemble_channel(c, rays, t.rx(), t.tx());
    return (t.combiners.adjoint() * h * t.precoders).diagonal();
}

} // namespace

TEST_CASE("quasi-omni entries have equal modulus and unit columns")
{
    RngStream rng(1);
    const TrainingSet t = random_training(8, {4}, {6}, rng);
    CHECK((t.combiners.cwiseAbs().array() - 0.5).abs().maxCoeff() < 1e-15);
    CHECK((t.precoders.cwiseAbs().array() - 1.0 / std::sqrt(6.0)).abs().maxCoeff() < 1e-15);
    for (Eigen::Index m = 0; m < 8; ++m)
    {
        CHECK(t.combiners.col(m).norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(t.precoders.col(m).norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    // Real and imaginary parts are +-1/sqrt(2N).
    const double q = 1.0 / std::sqrt(8.0);
    CHECK((t.combiners.real().cwiseAbs().array() - q).abs().maxCoeff() < 1e-15);
    CHECK((t.combiners.imag().cwiseAbs().array() - q).abs().maxCoeff() < 1e-15);
}

TEST_CASE("training draws are reproducible and nested")
{
    RngStream a(42);
    RngStream b(42);
    RngStream c(42);
    const TrainingSet x = random_training(32, {8}, {8}, a);
    const TrainingSet y = random_training(32, {8}, {8}, b);
    const TrainingSet z = random_training(16, {8}, {8}, c);
    CHECK(x.combiners == y.combiners);
    CHECK(x.precoders == y.precoders);
    CHECK(x.head(16).combiners == z.combiners);
    CHECK(x.head(16).precoders == z.precoders);
}

TEST_CASE("quasi-omni beams have unit average gain in every direction")
{
    RngStream rng(3);
    for (double angle : {0.0, 25.0 * kDeg, -70.0 * kDeg})
    {
        const CVec a = steering_vector(angle, {32});
        double total = 0.0;
        const int draws = 10000;
        for (int d = 0; d < draws; ++d)
            total += std::norm(random_training(1, {32}, {1}, rng).combiners.col(0).dot(a));
        CHECK(std::abs(total / draws - 1.0) < 0.05);
    }
}

TEST_CASE("direct-sum response equals diag(W^H H F)")
{
    RngStream rng(4);
    for (int k = 0; k < 5; ++k)
    {
        const TrainingSet t = random_training(12, {8}, {4}, rng);
        const ClusterParams c{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.1, 3.0)};
        const RayParams rays = sample_rays({2.0 * kDeg, 1.0 * kDeg, 6}, rng);
        const CVec mu = mean_response(c, rays, t);
        CHECK((mu - matrix_response(c, rays, t)).norm() < 1e-12 * mu.norm());
    }
}

TEST_CASE("matched single beam pair collects the full array gain")
{
    const ArraySpec rx{8};
    const ArraySpec tx{16};
    const double aoa = 0.3;
    const double aod = -0.6;
    const TrainingSet t = TrainingSet::single(steering_vector(aoa, rx) / std::sqrt(8.0),
                                              steering_vector(aod, tx) / 4.0);
    const CVec mu = mean_response({aoa, aod, 0.7}, RayParams::coherent({0.0}), t);
    CHECK(std::abs(mu(0) - cdouble(0.7 * std::sqrt(128.0), 0.0)) < 1e-12);
}

TEST_CASE("zero gain gives a zero response")
{
    RngStream rng(5);
    const TrainingSet t = random_training(4, {4}, {4}, rng);
    CHECK(mean_response({0.0, 0.0, 0.0}, RayParams::coherent({0.3}), t).norm() == 0.0);
}

TEST_CASE("noiseless observation equals the mean response")
{
    RngStream rng(6);
    const TrainingSet t = random_training(6, {4}, {4}, rng);
    const ClusterParams c{0.2, 0.1, 1.0};
    const RayParams rays = RayParams::coherent({0.5});
    CHECK(observe(c, rays, t, NoiseModel{0.0}, rng) == mean_response(c, rays, t));
}

TEST_CASE("noise variance matches sigma_n^2")
{
    RngStream rng(7);
    const CVec n = complex_noise(100000, 0.37, rng);
    const double mean_power = n.squaredNorm() / static_cast<double>(n.size());
    CHECK(std::abs(mean_power / 0.37 - 1.0) < 0.02);
    CHECK(std::abs(n.mean()) < 0.01);
    CHECK(std::abs(n.real().squaredNorm() / n.imag().squaredNorm() - 1.0) < 0.03);
}

TEST_CASE("observations are reproducible for a fixed seed")
{
    RngStream seed_a(8);
    RngStream seed_b(8);
    const TrainingSet t = random_training(6, {4}, {4}, seed_a);
    random_training(6, {4}, {4}, seed_b);
    const ClusterParams c{0.2, 0.1, 1.0};
    const RayParams rays = RayParams::coherent({0.5});
    CHECK(observe(c, rays, t, NoiseModel{0.5}, seed_a) == observe(c, rays, t, NoiseModel{0.5}, seed_b));
}

TEST_CASE("snr is defined against the path gain")
{
    CHECK(NoiseModel::from_snr_db(0.0).sigma_n_sq == doctest::Approx(1.0));
    CHECK(NoiseModel::from_snr_db(20.0, 2.0).sigma_n_sq == doctest::Approx(0.04));
}

TEST_CASE("malformed training sets are rejected")
{
    TrainingSet t;
    t.combiners = CMat::Ones(4, 2) * 0.5;
    t.precoders = CMat::Ones(4, 2) * 0.5;
    CHECK_NOTHROW(t.validate());
    t.precoders(0, 1) = 0.6;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.precoders = CMat::Ones(4, 3) * 0.5;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    CHECK_THROWS_AS(NoiseModel{-1.0}.validate(), ConfigError);
}
