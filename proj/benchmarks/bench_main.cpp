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
#include "mmtrack/beamgain.hpp"
#include "mmtrack/crlb.hpp"
#include "mmtrack/sounding.hpp"
#include "mmtrack/trackers.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

using namespace mmtrack;

constexpr double kDeg = std::numbers::pi / 180.0;

void BM_ObservationFim(benchmark::State &state)
{
    const auto rays_count = static_cast<std::size_t>(state.range(0));
    RngStream rng(7);
    const ArraySpec spec{32};
    const SpreadModel spread{2.0 * kDeg, 2.0 * kDeg, rays_count};
    const TrainingSet training = random_training(32, spec, spec, rng);
    const ParamVector eta({0.2, -0.3, 1.0}, sample_rays(spread, rng));
    const PriorFim prior = prior_fim(spread);
    for (auto _ : state)
    {
        const Eigen::MatrixXd j = observation_fim(eta, training, 0.1);
        benchmark::DoNotOptimize(efim_cluster(j, prior).crlb_aoa);
    }
}
BENCHMARK(BM_ObservationFim)->Arg(1)->Arg(10)->Arg(20);

void BM_MlAngleStep(benchmark::State &state)
{
    RngStream rng(11);
    const ArraySpec spec{32};
    const TrainingSet training = random_training(32, spec, spec, rng);
    const ClusterParams cluster{0.1, -0.2, 1.0};
    const CVec y = observe(cluster, RayParams::coherent({0.0}), training, NoiseModel{1.0}, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(ml_angle_step(y, training, {1.0, 0.0}, 0.11, -0.19).objective);
}
BENCHMARK(BM_MlAngleStep);

void BM_SynthesizedBeam(benchmark::State &state)
{
    const ArraySpec spec{static_cast<std::size_t>(state.range(0))};
    beam_synthesizer(spec);
    double center = -0.5;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(synthesized_beam(10.0 * kDeg, center, spec).data());
        center = center > 0.5 ? -0.5 : center + 0.01;
    }
}
BENCHMARK(BM_SynthesizedBeam)->Arg(16)->Arg(32)->Arg(64);

void BM_AvgGainMc(benchmark::State &state)
{
    const SpreadModel spread{5.0 * kDeg, 0.0, 20};
    for (auto _ : state)
        benchmark::DoNotOptimize(avg_gain_mc(2.0 * kDeg, 0.0, 10.0 * kDeg, std::numbers::pi, spread, 10000, 3).mean);
}
BENCHMARK(BM_AvgGainMc)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
