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
#include "mmtrack/crlb.hpp"
#include "mmtrack/errors.hpp"
#include "mmtrack/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mmtrack {

ParamVector::ParamVector(Eigen::VectorXd values) : values_(std::move(values))
{
    if (values_.size() < 6 || (values_.size() - kClusterSize) % 3 != 0)
        throw ConfigError("ParamVector: length must be 3 + 3R with R >= 1");
}

ParamVector::ParamVector(const ClusterParams &cluster, const RayParams &rays)
{
    rays.validate();
    const std::size_t R = rays.num_rays();
    values_.resize(kClusterSize + 3 * static_cast<Eigen::Index>(R));
    values_(kAoa) = cluster.aoa;
    values_(kAod) = cluster.aod;
    values_(kGain) = cluster.gain;
    for (std::size_t r = 0; r < R; ++r)
    {
        values_(ray_aoa_index(r)) = rays.offsets_aoa[r];
        values_(ray_aod_index(r)) = rays.offsets_aod[r];
        values_(ray_phase_index(r)) = rays.phases[r];
    }
}

ClusterParams ParamVector::cluster() const
{
    return {values_(kAoa), values_(kAod), values_(kGain)};
}

RayParams ParamVector::rays() const
{
    RayParams rays;
    const std::size_t R = num_rays();
    for (std::size_t r = 0; r < R; ++r)
    {
        rays.offsets_aoa.push_back(values_(ray_aoa_index(r)));
        rays.offsets_aod.push_back(values_(ray_aod_index(r)));
        rays.phases.push_back(values_(ray_phase_index(r)));
    }
    return rays;
}

CMat mean_jacobian(const ParamVector &eta, const TrainingSet &training)
{
    training.validate();
    const ClusterParams cluster = eta.cluster();
    // Phases are not range-checked here: finite-difference probes may step past pi.
    RayParams rays = eta.rays();
    const std::size_t R = rays.num_rays();
    const ArraySpec rx = training.rx();
    const ArraySpec tx = training.tx();
    const double inv_sqrt_r = 1.0 / std::sqrt(static_cast<double>(R));
    const double scale = cluster.gain * inv_sqrt_r;

    const auto M = static_cast<Eigen::Index>(training.num_slots());
    CMat jac = CMat::Zero(M, eta.size());
    for (std::size_t r = 0; r < R; ++r)
    {
        const double phi = ray_aoa(cluster, rays, r);
        const double theta = ray_aod(cluster, rays, r);
        const CVec a_rx = training.combiners.adjoint() * steering_vector(phi, rx);
        const CVec d_rx = training.combiners.adjoint() * steering_derivative(phi, rx);
        const CVec a_tx = (training.precoders.adjoint() * steering_vector(theta, tx)).conjugate();
        const CVec d_tx = (training.precoders.adjoint() * steering_derivative(theta, tx)).conjugate();
        const cdouble rot = std::polar(1.0, rays.phases[r]);

        const CVec v_aa = rot * a_rx.cwiseProduct(a_tx);
        const CVec v_da = rot * d_rx.cwiseProduct(a_tx);
        const CVec v_ad = rot * a_rx.cwiseProduct(d_tx);

        jac.col(ParamVector::kAoa) += scale * v_da;
        jac.col(ParamVector::kAod) += scale * v_ad;
        jac.col(ParamVector::kGain) += inv_sqrt_r * v_aa;
        jac.col(ParamVector::ray_aoa_index(r)) = scale * v_da;
        jac.col(ParamVector::ray_aod_index(r)) = scale * v_ad;
        jac.col(ParamVector::ray_phase_index(r)) = cdouble(0.0, scale) * v_aa;
    }
    return jac;
}

Eigen::MatrixXd observation_fim(const ParamVector &eta, const TrainingSet &training, double sigma_n_sq)
{
    if (!(sigma_n_sq > 0.0))
        throw ConfigError("observation_fim: sigma_n_sq must be positive (noise-free observation has infinite information)");
    const CMat jac = mean_jacobian(eta, training);
    Eigen::MatrixXd fim = (2.0 / sigma_n_sq) * (jac.adjoint() * jac).real();
    // Symmetrize rounding noise of the Gram product.
    return 0.5 * (fim + fim.transpose());
}

PriorFim prior_fim(const SpreadModel &model)
{
    return prior_fim(model, model.effective_rays());
}

PriorFim prior_fim(const SpreadModel &model, std::size_t num_rays)
{
    model.validate();
    if (num_rays < 1)
        throw ConfigError("prior_fim: num_rays must be at least 1");
    const Eigen::Index n = ParamVector::kClusterSize + 3 * static_cast<Eigen::Index>(num_rays);
    PriorFim prior{Eigen::MatrixXd::Zero(n, n), std::vector<bool>(static_cast<std::size_t>(n), false)};

    auto info = [](double sigma) { return std::isinf(sigma) ? 0.0 : 1.0 / (sigma * sigma); };
    for (std::size_t r = 0; r < num_rays; ++r)
    {
        const Eigen::Index ia = ParamVector::ray_aoa_index(r);
        const Eigen::Index id = ParamVector::ray_aod_index(r);
        if (model.sigma_ras == 0.0)
            prior.pinned[static_cast<std::size_t>(ia)] = true;
        else
            prior.matrix(ia, ia) = info(model.sigma_ras);
        if (model.sigma_tas == 0.0)
            prior.pinned[static_cast<std::size_t>(id)] = true;
        else
            prior.matrix(id, id) = info(model.sigma_tas);
    }
    return prior;
}

namespace {

const char *cluster_name(Eigen::Index i)
{
    switch (i)
    {
    case ParamVector::kAoa: return "cluster AoA";
    case ParamVector::kAod: return "cluster AoD";
    default: return "cluster gain";
    }
}

} // namespace

ClusterEfim efim_cluster(const Eigen::MatrixXd &j_obs, const PriorFim &j_prior)
{
    const Eigen::Index n = j_obs.rows();
    if (j_obs.cols() != n || j_prior.matrix.rows() != n || static_cast<Eigen::Index>(j_prior.pinned.size()) != n)
        throw ConfigError("efim_cluster: observation and prior information sizes differ");

    std::vector<Eigen::Index> nuisance;
    for (Eigen::Index i = ParamVector::kClusterSize; i < n; ++i)
        if (!j_prior.pinned[static_cast<std::size_t>(i)])
            nuisance.push_back(i);

    const Eigen::MatrixXd total = j_obs + j_prior.matrix;
    const Eigen::Matrix3d j_cc = total.topLeftCorner<3, 3>();
    ClusterEfim out;
    out.efim = j_cc;

    if (!nuisance.empty())
    {
        const auto k = static_cast<Eigen::Index>(nuisance.size());
        Eigen::MatrixXd j_nn(k, k);
        Eigen::MatrixXd j_nc(k, 3);
        for (Eigen::Index a = 0; a < k; ++a)
        {
            for (Eigen::Index b = 0; b < k; ++b)
                j_nn(a, b) = total(nuisance[a], nuisance[b]);
            for (Eigen::Index c = 0; c < 3; ++c)
                j_nc(a, c) = total(nuisance[a], c);
        }

        // Numerically singular: a pivot below k * machine epsilon of the largest one.
        Eigen::LDLT<Eigen::MatrixXd> ldlt(j_nn);
        const Eigen::VectorXd dvec = ldlt.vectorD();
        const double dmax = dvec.cwiseAbs().maxCoeff();
        const double tiny = static_cast<double>(k) * std::numeric_limits<double>::epsilon() * dmax;
        const bool ok = ldlt.info() == Eigen::Success && dvec.minCoeff() > tiny;
        if (!ok)
        {
            const double floor = 1e-12 * std::max(j_nn.trace(), 0.0);
            if (!(floor > 0.0))
                throw NumericalError("efim_cluster: nuisance information block is zero "
                                     "(no information about the ray parameters, e.g. zero cluster gain)");
            j_nn.diagonal().array() += floor;
            ldlt.compute(j_nn);
            if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0)
                throw NumericalError("efim_cluster: nuisance information block is singular after regularization");
            out.regularized = true;
        }
        out.efim = j_cc - j_nc.transpose() * ldlt.solve(j_nc);
        out.efim = 0.5 * (out.efim + out.efim.transpose()).eval();
    }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(out.efim);
    const Eigen::Vector3d ev = eig.eigenvalues();
    if (!(ev(0) > 1e-12 * std::abs(ev(2))) || !std::isfinite(ev(2)))
    {
        Eigen::Index dominant = 0;
        eig.eigenvectors().col(0).cwiseAbs().maxCoeff(&dominant);
        throw NumericalError(std::string("efim_cluster: cluster EFIM is singular along the ") +
                             cluster_name(dominant) + " direction (smallest eigenvalue " +
                             std::to_string(ev(0)) + ")");
    }
    const Eigen::Matrix3d inv = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    out.crlb_aoa = inv(0, 0);
    out.crlb_aod = inv(1, 1);
    return out;
}

FimBundle compute_fim_bundle(const ParamVector &eta, const TrainingSet &training,
                             const NoiseModel &noise, const SpreadModel &spread)
{
    FimBundle b;
    b.j_obs = observation_fim(eta, training, noise.sigma_n_sq);
    b.j_prior = prior_fim(spread, eta.num_rays());
    const ClusterEfim e = efim_cluster(b.j_obs, b.j_prior);
    b.efim_cluster = e.efim;
    b.crlb_aoa = e.crlb_aoa;
    b.crlb_aod = e.crlb_aod;
    b.regularized = e.regularized;
    return b;
}

ScenarioDraw draw_scenario(const CrlbScenario &scenario, std::uint64_t seed, std::size_t draw,
                           std::size_t attempt)
{
    const RngStream base(derive_seed(seed, {draw, attempt}));
    ScenarioDraw out;

    if (scenario.fixed_cluster)
    {
        out.cluster = *scenario.fixed_cluster;
    }
    else
    {
        const double margin = 4.0 * std::max(scenario.spread.sigma_ras, scenario.spread.sigma_tas);
        const double limit = std::min(scenario.cluster_angle_limit, std::numbers::pi / 2.0 - margin);
        if (!(limit >= 0.0))
            throw ConfigError("draw_scenario: angular spread leaves no valid cluster angle range");
        RngStream rng = base.child({tag_hash("cluster")});
        out.cluster.aoa = rng.uniform(-limit, limit);
        out.cluster.aod = rng.uniform(-limit, limit);
        out.cluster.gain = scenario.gain;
    }

    RngStream ray_rng = base.child({tag_hash("rays")});
    out.rays = sample_rays(scenario.spread, ray_rng);

    if (scenario.fixed_training)
    {
        out.training = *scenario.fixed_training;
    }
    else
    {
        RngStream rng = base.child({tag_hash("training")});
        out.training = random_training(scenario.training_slots, scenario.rx, scenario.tx, rng);
    }
    return out;
}

AveragedBound averaged_crlb(const CrlbScenario &scenario, std::size_t num_draws,
                            std::uint64_t seed, unsigned workers)
{
    if (num_draws < 1)
        throw ConfigError("averaged_crlb: num_draws must be at least 1");
    scenario.spread.validate();
    scenario.noise.validate();

    // Deterministic beamformers and a fixed LOS cluster: the bound does not depend on
    // the draw (a single ray phase rotates every Jacobian column equally).
    if (scenario.fixed_cluster && scenario.fixed_training && scenario.spread.is_line_of_sight())
        num_draws = 1;

    constexpr std::size_t kMaxAttempts = 64;
    struct DrawResult {
        double var_aoa = 0.0;
        double var_aod = 0.0;
        std::size_t rejected = 0;
        bool regularized = false;
    };
    std::vector<DrawResult> results(num_draws);

    parallel_for(num_draws, workers, [&](std::size_t d) {
        for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt)
        {
            try
            {
                const ScenarioDraw s = draw_scenario(scenario, seed, d, attempt);
                const FimBundle b = compute_fim_bundle(ParamVector(s.cluster, s.rays), s.training,
                                                       scenario.noise, scenario.spread);
                results[d] = {b.crlb_aoa, b.crlb_aod, attempt, b.regularized};
                return;
            }
            catch (const DomainError &)
            {
            }
            catch (const NumericalError &)
            {
            }
        }
        throw NumericalError("averaged_crlb: draw " + std::to_string(d) + " failed " +
                             std::to_string(kMaxAttempts) + " consecutive attempts");
    });

    CompensatedSum aoa;
    CompensatedSum aod;
    AveragedBound out;
    for (const auto &r : results)
    {
        aoa.add(r.var_aoa);
        aod.add(r.var_aod);
        out.rejected += r.rejected;
        out.regularized += r.regularized ? 1 : 0;
    }
    out.draws = num_draws;
    out.rmse_aoa = std::sqrt(aoa.value() / static_cast<double>(num_draws));
    out.rmse_aod = std::sqrt(aod.value() / static_cast<double>(num_draws));
    return out;
}

} // namespace mmtrack
