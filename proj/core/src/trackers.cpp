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
#include "mmtrack/trackers.hpp"
#include "mmtrack/beamgain.hpp"
#include "mmtrack/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mmtrack {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

CVec rx_projection(const TrainingSet &training, double aoa)
{
    return training.combiners.adjoint() * steering_vector(aoa, training.rx());
}

CVec tx_projection(const TrainingSet &training, double aod)
{
    return (training.precoders.adjoint() * steering_vector(aod, training.tx())).conjugate();
}

double residual(const CVec &y, cdouble gain, const CVec &rx, const CVec &tx)
{
    double acc = 0.0;
    for (Eigen::Index m = 0; m < y.size(); ++m)
        acc += std::norm(y(m) - gain * rx(m) * tx(m));
    return acc;
}

// Vertex offset of the parabola through (-1, f_minus), (0, f0), (1, f_plus), in steps.
double parabola_vertex(double f_minus, double f0, double f_plus)
{
    const double curvature = f_minus - 2.0 * f0 + f_plus;
    if (!(curvature > 0.0))
        return 0.0;
    return std::clamp(0.5 * (f_minus - f_plus) / curvature, -1.0, 1.0);
}

} // namespace

void MlSearch::validate() const
{
    if (!(grid_step > 0.0) || !(window >= grid_step))
        throw ConfigError("MlSearch: grid_step must be positive and no larger than window");
}

CVec ml_template(const TrainingSet &training, double aoa, double aod)
{
    return rx_projection(training, aoa).cwiseProduct(tx_projection(training, aod));
}

double ml_objective(const CVec &y, const TrainingSet &training, cdouble gain, double aoa, double aod)
{
    return (y - gain * ml_template(training, aoa, aod)).squaredNorm();
}

cdouble ml_gain_step(const CVec &y, const TrainingSet &training, double aoa_est, double aod_est)
{
    const CVec s = ml_template(training, aoa_est, aod_est);
    if (y.size() != s.size())
        throw ConfigError("ml_gain_step: observation length does not match training slots");
    const double energy = s.squaredNorm();
    if (!(energy > std::numeric_limits<double>::min()))
        throw NumericalError("ml_gain_step: degenerate template (zero response at the current angles)");
    return s.dot(y) / energy;
}

AngleStep ml_angle_step(const CVec &y, const TrainingSet &training, cdouble gain_est,
                        double prev_aoa, double prev_aod, const MlSearch &search)
{
    search.validate();
    check_angle(prev_aoa, "previous AoA estimate");
    check_angle(prev_aod, "previous AoD estimate");

    const int half = static_cast<int>(std::lround(search.window / search.grid_step));
    AngleStep out;

    std::vector<int> rx_offsets;
    std::vector<int> tx_offsets;
    for (int k = -half; k <= half; ++k)
    {
        if (angle_in_domain(prev_aoa + k * search.grid_step))
            rx_offsets.push_back(k);
        else
            out.clipped = true;
        if (angle_in_domain(prev_aod + k * search.grid_step))
            tx_offsets.push_back(k);
        else
            out.clipped = true;
    }

    const auto M = static_cast<Eigen::Index>(training.num_slots());
    CMat rx(M, static_cast<Eigen::Index>(rx_offsets.size()));
    CMat tx(M, static_cast<Eigen::Index>(tx_offsets.size()));
    std::size_t rx_center = 0;
    std::size_t tx_center = 0;
    for (std::size_t i = 0; i < rx_offsets.size(); ++i)
    {
        rx.col(static_cast<Eigen::Index>(i)) = rx_projection(training, prev_aoa + rx_offsets[i] * search.grid_step);
        if (rx_offsets[i] == 0)
            rx_center = i;
    }
    for (std::size_t j = 0; j < tx_offsets.size(); ++j)
    {
        tx.col(static_cast<Eigen::Index>(j)) = tx_projection(training, prev_aod + tx_offsets[j] * search.grid_step);
        if (tx_offsets[j] == 0)
            tx_center = j;
    }

    // ||y - g r.t||^2 = ||y||^2 - 2 Re{g sum conj(y) r t} + |g|^2 sum |r|^2 |t|^2
    const CMat cross = rx.transpose() * y.conjugate().asDiagonal() * tx;
    const Eigen::MatrixXd energy = rx.cwiseAbs2().transpose() * tx.cwiseAbs2();
    const Eigen::MatrixXd cost = (y.squaredNorm() - 2.0 * (gain_est * cross.array()).real() +
                                  std::norm(gain_est) * energy.array()).matrix();

    // Incumbent first; strict improvement required to move.
    auto bi = static_cast<Eigen::Index>(rx_center);
    auto bj = static_cast<Eigen::Index>(tx_center);
    double best = cost(bi, bj);
    for (Eigen::Index i = 0; i < cost.rows(); ++i)
        for (Eigen::Index j = 0; j < cost.cols(); ++j)
            if (cost(i, j) < best)
            {
                best = cost(i, j);
                bi = i;
                bj = j;
            }

    const double grid_aoa = prev_aoa + rx_offsets[static_cast<std::size_t>(bi)] * search.grid_step;
    const double grid_aod = prev_aod + tx_offsets[static_cast<std::size_t>(bj)] * search.grid_step;
    out.aoa = grid_aoa;
    out.aod = grid_aod;
    // Recompute directly so comparisons below use one formula.
    best = residual(y, gain_est, rx.col(bi), tx.col(bj));
    out.objective = best;

    // 3x3 stencil of the exact objective around the best grid point, in grid steps.
    const double h = search.grid_step;
    double f[3][3];
    bool stencil_ok = true;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
        {
            const double aoa = grid_aoa + a * h;
            const double aod = grid_aod + b * h;
            if (a == 0 && b == 0)
                f[1][1] = best;
            else if (angle_in_domain(aoa) && angle_in_domain(aod))
                f[a + 1][b + 1] = ml_objective(y, training, gain_est, aoa, aod);
            else
                stencil_ok = false;
        }

    std::vector<std::array<double, 2>> candidates;
    if (stencil_ok)
    {
        // Joint quadratic model: the per-axis vertices alone ignore AoA/AoD coupling.
        const double g_a = 0.5 * (f[2][1] - f[0][1]);
        const double g_d = 0.5 * (f[1][2] - f[1][0]);
        const double h_aa = f[2][1] - 2.0 * best + f[0][1];
        const double h_dd = f[1][2] - 2.0 * best + f[1][0];
        const double h_ad = 0.25 * (f[2][2] - f[2][0] - f[0][2] + f[0][0]);
        const double det = h_aa * h_dd - h_ad * h_ad;
        if (h_aa > 0.0 && det > 0.0)
        {
            const double da = std::clamp(-(h_dd * g_a - h_ad * g_d) / det, -1.0, 1.0);
            const double dd = std::clamp(-(h_aa * g_d - h_ad * g_a) / det, -1.0, 1.0);
            candidates.push_back({da * h, dd * h});
        }
        const double va = parabola_vertex(f[0][1], best, f[2][1]) * h;
        const double vd = parabola_vertex(f[1][0], best, f[1][2]) * h;
        candidates.push_back({va, vd});
        candidates.push_back({va, 0.0});
        candidates.push_back({0.0, vd});
    }

    for (const auto &c : candidates)
    {
        if (c[0] == 0.0 && c[1] == 0.0)
            continue;
        const double aoa = grid_aoa + c[0];
        const double aod = grid_aod + c[1];
        if (!angle_in_domain(aoa) || !angle_in_domain(aod))
            continue;
        const double value = ml_objective(y, training, gain_est, aoa, aod);
        if (value < best)
        {
            out.aoa = aoa;
            out.aod = aod;
            out.objective = value;
            break;
        }
    }
    return out;
}

MlFrameResult ml_track_frame(const MlTrackerState &state, const CVec &y, const TrainingSet &training,
                             std::size_t num_inner_iters, const MlSearch &search)
{
    MlFrameResult out;
    out.state = state;
    auto &s = out.state;
    for (std::size_t it = 0; it < num_inner_iters; ++it)
    {
        s.gain_est = ml_gain_step(y, training, s.aoa_est, s.aod_est);
        out.residuals.push_back(ml_objective(y, training, s.gain_est, s.aoa_est, s.aod_est));
        const AngleStep step = ml_angle_step(y, training, s.gain_est, s.aoa_est, s.aod_est, search);
        s.aoa_est = step.aoa;
        s.aod_est = step.aod;
        out.clipped = out.clipped || step.clipped;
        out.residuals.push_back(step.objective);
    }
    s.gain_est = ml_gain_step(y, training, s.aoa_est, s.aod_est);
    out.residuals.push_back(ml_objective(y, training, s.gain_est, s.aoa_est, s.aod_est));
    ++s.frame_index;
    return out;
}

SectorCodebook build_sector_codebook(double beam_width, const ArraySpec &spec)
{
    if (!(beam_width > 0.0) || beam_width > std::numbers::pi + 1e-12)
        throw ConfigError("build_sector_codebook: beam width must be in (0, pi], got " + std::to_string(beam_width));
    spec.validate();

    SectorCodebook cb;
    cb.beam_width = beam_width;
    const auto count = static_cast<std::size_t>(std::ceil(std::numbers::pi / beam_width - 1e-9));
    for (std::size_t s = 0; s < count; ++s)
    {
        const double lo = -kHalfPi + static_cast<double>(s) * beam_width;
        const double hi = std::min(kHalfPi, lo + beam_width);
        cb.centers.push_back(0.5 * (lo + hi));
        cb.widths.push_back(hi - lo);
    }

    const double min_width = min_beam_width(spec);
    cb.weights.resize(static_cast<Eigen::Index>(spec.num_elements), static_cast<Eigen::Index>(count));
    for (std::size_t s = 0; s < count; ++s)
        cb.weights.col(static_cast<Eigen::Index>(s)) =
            synthesized_beam(std::max(cb.widths[s], min_width), cb.centers[s], spec);
    return cb;
}

std::size_t sector_of(const SectorCodebook &codebook, double angle)
{
    check_angle(angle);
    if (codebook.size() == 0)
        throw ConfigError("sector_of: empty codebook");
    // Sector s covers (-pi/2 + s*width, -pi/2 + (s+1)*width]; the first also takes -pi/2.
    const double pos = (angle + kHalfPi) / codebook.beam_width;
    const double index = std::ceil(pos - 1e-9) - 1.0;
    return static_cast<std::size_t>(std::clamp(index, 0.0, static_cast<double>(codebook.size() - 1)));
}

SectorTrackerState sector_track_frame(const SectorTrackerState &state, const SectorCodebook &rx_codebook,
                                      const SectorCodebook &tx_codebook, const ClusterParams &cluster,
                                      const RayParams &rays, const NoiseModel &noise,
                                      std::size_t probe_radius, RngStream &rng)
{
    if (probe_radius < 1)
        throw ConfigError("sector_track_frame: probe_radius must be at least 1");
    if (state.rx_sector >= rx_codebook.size() || state.tx_sector >= tx_codebook.size())
        throw ConfigError("sector_track_frame: sector index out of codebook bounds");

    auto range = [probe_radius](std::size_t current, std::size_t size) {
        const std::size_t lo = current >= probe_radius ? current - probe_radius : 0;
        const std::size_t hi = std::min(size - 1, current + probe_radius);
        return std::pair{lo, hi};
    };
    const auto [rx_lo, rx_hi] = range(state.rx_sector, rx_codebook.size());
    const auto [tx_lo, tx_hi] = range(state.tx_sector, tx_codebook.size());

    SectorTrackerState best = state;
    double incumbent_metric = -1.0;
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> probes;
    for (std::size_t i = rx_lo; i <= rx_hi; ++i)
        for (std::size_t j = tx_lo; j <= tx_hi; ++j)
        {
            const TrainingSet slot = TrainingSet::single(rx_codebook.weights.col(static_cast<Eigen::Index>(i)),
                                                         tx_codebook.weights.col(static_cast<Eigen::Index>(j)));
            const double metric = std::norm(observe(cluster, rays, slot, noise, rng)(0));
            probes.push_back({{i, j}, metric});
            if (i == state.rx_sector && j == state.tx_sector)
                incumbent_metric = metric;
        }

    best.last_metric = incumbent_metric;
    for (const auto &[pair, metric] : probes)
        if (metric > best.last_metric)
        {
            best.rx_sector = pair.first;
            best.tx_sector = pair.second;
            best.last_metric = metric;
        }
    return best;
}

} // namespace mmtrack
