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

#include <cstddef>
#include <cstdint>
#include <memory>

namespace mmtrack {

// Ideal angle-steering beam: rectangular amplitude sqrt(pi/width) on
// |angle - center| <= width/2, zero elsewhere. Unit power over the angle domain.
struct BeamSpec {
    double width = 0.0;
    double center = 0.0;

    void validate() const;
};

double ideal_gain(double angle, const BeamSpec &beam);

// |sum_r exp(j psi_r)/sqrt(R) * g_rx(aoa_r) * g_tx(aod_r)|^2 with ideal patterns.
double instantaneous_gain(const ClusterParams &cluster, const RayParams &rays,
                          const BeamSpec &rx_beam, const BeamSpec &tx_beam);

struct GainEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t draws = 0;
};

// Monte Carlo average of instantaneous_gain over ray draws, with the beams steered at
// cluster - (phi_eps, theta_eps).
GainEstimate avg_gain_mc(double phi_eps, double theta_eps, double rx_width, double tx_width,
                         const SpreadModel &spread, std::size_t num_draws, std::uint64_t seed);

// Average gain of one beam under Gaussian angular spread and pointing error:
// (pi/width) * P(|eps + offset| <= width/2), offset ~ N(0, sigma^2).
double average_beam_factor(double eps, double width, double sigma);

// Product of the receive and transmit factors.
double avg_gain_closed(double phi_eps, double theta_eps, double rx_width, double tx_width,
                       double sigma_ras, double sigma_tas);

// Standard normal CDF through erfc.
double normal_cdf(double x);

// Narrowest beam the array is asked to synthesize: 0.8 * pi / N.
double min_beam_width(const ArraySpec &spec);

// Least-squares finite-array approximation of the ideal pattern. The ideal amplitude
// is sampled on a 0.25 degree angle grid (u = sin(angle) per sample) with a linear
// phase ramp centered on the beam, fitted in the least-squares sense and normalized
// to unit norm. The pseudo-inverse depends only on N and is computed once.
class BeamSynthesizer {
public:
    explicit BeamSynthesizer(const ArraySpec &spec);

    const ArraySpec &spec() const { return spec_; }
    CVec beam(double width, double center) const;

private:
    ArraySpec spec_;
    Eigen::VectorXd grid_;  // angles, radians
    CMat pinv_;             // N x grid
};

// Shared synthesizer for spec.num_elements (thread safe).
const BeamSynthesizer &beam_synthesizer(const ArraySpec &spec);

CVec synthesized_beam(double width, double center, const ArraySpec &spec);

// |w^H a(angle)|^2
double pattern_gain(const CVec &weights, double angle, const ArraySpec &spec);

} // namespace mmtrack
