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
#include "mmtrack/errors.hpp"
#include "mmtrack/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace mmtrack {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGridStep = 0.25 * kPi / 180.0;

} // namespace

void BeamSpec::validate() const
{
    if (!(width > 0.0 && width <= kPi))
        throw ConfigError("BeamSpec: width must be in (0, pi], got " + std::to_string(width));
    if (!std::isfinite(center))
        throw ConfigError("BeamSpec: center must be finite");
}

double ideal_gain(double angle, const BeamSpec &beam)
{
    beam.validate();
    return std::abs(angle - beam.center) <= beam.width / 2.0 ? std::sqrt(kPi / beam.width) : 0.0;
}

double instantaneous_gain(const ClusterParams &cluster, const RayParams &rays,
                          const BeamSpec &rx_beam, const BeamSpec &tx_beam)
{
    rays.validate();
    const std::size_t R = rays.num_rays();
    cdouble sum = 0.0;
    for (std::size_t r = 0; r < R; ++r)
    {
        const double amp = ideal_gain(cluster.aoa + rays.offsets_aoa[r], rx_beam) *
                           ideal_gain(cluster.aod + rays.offsets_aod[r], tx_beam);
        if (amp != 0.0)
            sum += amp * std::polar(1.0, rays.phases[r]);
    }
    return std::norm(sum) / static_cast<double>(R);
}

GainEstimate avg_gain_mc(double phi_eps, double theta_eps, double rx_width, double tx_width,
                         const SpreadModel &spread, std::size_t num_draws, std::uint64_t seed)
{
    if (num_draws < 1)
        throw ConfigError("avg_gain_mc: num_draws must be at least 1");
    const BeamSpec rx_beam{rx_width, -phi_eps};
    const BeamSpec tx_beam{tx_width, -theta_eps};
    rx_beam.validate();
    tx_beam.validate();
    const ClusterParams cluster{0.0, 0.0, 1.0};

    RngStream rng(seed);
    CompensatedSum sum;
    CompensatedSum sum_sq;
    for (std::size_t d = 0; d < num_draws; ++d)
    {
        const double g = instantaneous_gain(cluster, sample_rays(spread, rng), rx_beam, tx_beam);
        sum.add(g);
        sum_sq.add(g * g);
    }
    const double n = static_cast<double>(num_draws);
    GainEstimate est;
    est.draws = num_draws;
    est.mean = sum.value() / n;
    if (num_draws > 1)
    {
        const double var = std::max(0.0, (sum_sq.value() - n * est.mean * est.mean) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    }
    return est;
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double average_beam_factor(double eps, double width, double sigma)
{
    if (!(width > 0.0))
        throw ConfigError("average_beam_factor: width must be positive");
    if (!(sigma >= 0.0))
        throw ConfigError("average_beam_factor: sigma must be nonnegative");
    const double level = kPi / width;
    if (sigma == 0.0)
        return std::abs(eps) <= width / 2.0 ? level : 0.0;
    // Differences of upper tails keep precision when both arguments are large.
    const double hi = (-eps + width / 2.0) / sigma;
    const double lo = (-eps - width / 2.0) / sigma;
    const double mass = lo > 0.0 ? normal_cdf(-lo) - normal_cdf(-hi) : normal_cdf(hi) - normal_cdf(lo);
    return level * mass;
}

double avg_gain_closed(double phi_eps, double theta_eps, double rx_width, double tx_width,
                       double sigma_ras, double sigma_tas)
{
    return average_beam_factor(phi_eps, rx_width, sigma_ras) *
           average_beam_factor(theta_eps, tx_width, sigma_tas);
}

double min_beam_width(const ArraySpec &spec)
{
    spec.validate();
    return 0.8 * kPi / static_cast<double>(spec.num_elements);
}

BeamSynthesizer::BeamSynthesizer(const ArraySpec &spec) : spec_(spec)
{
    spec_.validate();
    const auto points = static_cast<Eigen::Index>(std::lround(kPi / kGridStep)) + 1;
    const auto N = static_cast<Eigen::Index>(spec_.num_elements);
    grid_.resize(points);
    CMat basis(points, N);
    for (Eigen::Index i = 0; i < points; ++i)
    {
        grid_(i) = std::clamp(-kPi / 2.0 + kGridStep * static_cast<double>(i), -kPi / 2.0, kPi / 2.0);
        basis.row(i) = steering_vector(grid_(i), spec_).transpose();
    }
    const CMat gram = basis.adjoint() * basis;
    pinv_ = gram.ldlt().solve(basis.adjoint());
}

CVec BeamSynthesizer::beam(double width, double center) const
{
    const double min_width = min_beam_width(spec_);
    if (!(width >= min_width))
        throw ConfigError("synthesized_beam: width " + std::to_string(width * 180.0 / kPi) +
                          " deg is narrower than a " + std::to_string(spec_.num_elements) +
                          "-element array supports; minimum is " + std::to_string(min_width * 180.0 / kPi) + " deg");
    if (width > kPi)
        throw ConfigError("synthesized_beam: width must not exceed pi");
    check_angle(center, "beam center");

    const double level = std::sqrt(kPi / width);
    const double ramp = kPi * (static_cast<double>(spec_.num_elements) - 1.0) / 2.0;
    const double u_c = std::sin(center);
    CVec target = CVec::Zero(grid_.size());
    // Samples on an edge (up to rounding) get half weight so adjacent beams split it evenly.
    const double edge_tol = 1e-9;
    for (Eigen::Index i = 0; i < grid_.size(); ++i)
    {
        const double excess = std::abs(grid_(i) - center) - width / 2.0;
        if (excess <= edge_tol)
        {
            const double amp = excess >= -edge_tol ? 0.5 * level : level;
            target(i) = std::polar(amp, ramp * (std::sin(grid_(i)) - u_c));
        }
    }

    // Pattern b_i = w^H a(angle_i) = (basis * conj(w))_i
    CVec w = (pinv_ * target).conjugate();
    const double norm = w.norm();
    if (!(norm > 0.0))
        throw NumericalError("synthesized_beam: beam has no grid support");
    return w / norm;
}

const BeamSynthesizer &beam_synthesizer(const ArraySpec &spec)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<BeamSynthesizer>> cache;
    std::lock_guard lock(mutex);
    auto &slot = cache[spec.num_elements];
    if (!slot)
        slot = std::make_unique<BeamSynthesizer>(spec);
    return *slot;
}

CVec synthesized_beam(double width, double center, const ArraySpec &spec)
{
    return beam_synthesizer(spec).beam(width, center);
}

double pattern_gain(const CVec &weights, double angle, const ArraySpec &spec)
{
    if (weights.size() != static_cast<Eigen::Index>(spec.num_elements))
        throw ConfigError("pattern_gain: weight length " + std::to_string(weights.size()) +
                          " does not match array size " + std::to_string(spec.num_elements));
    return std::norm(weights.dot(steering_vector(angle, spec)));
}

} // namespace mmtrack
