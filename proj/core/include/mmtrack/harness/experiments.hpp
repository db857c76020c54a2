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

#include "mmtrack/channel.hpp"
#include "mmtrack/harness/config.hpp"
#include "mmtrack/harness/csv.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace mmtrack::harness {

inline constexpr const char *kToolkitVersion = "0.3.0";

double deg2rad(double deg);
double rad2deg(double rad);

// ---------------------------------------------------------------------------
// crlb-sweep
// ---------------------------------------------------------------------------

struct CrlbSweepRow {
    double snr_db = 0.0;
    std::size_t training_slots = 0;
    double sigma_ras_deg = 0.0;
    double rmse_bound_deg = 0.0;
    double rmse_bound_aod_deg = 0.0;
    double rmse_ml_deg = 0.0;
    std::size_t trials = 0;
    std::size_t bound_draws = 0;
    std::size_t rejected_draws = 0;
};

// For each (sigma, M, SNR): averaged CRLB over random training / ray draws and the RMSE
// of single-frame ML estimation started within the search window of the truth. Bound
// draws and ML trials use common random numbers across grid points (keyed by draw
// index only), so neighbouring points differ only by the swept quantity.
std::vector<CrlbSweepRow> run_crlb_sweep(const ScenarioConfig &config, unsigned workers = 1);

// ---------------------------------------------------------------------------
// gain-curve
// ---------------------------------------------------------------------------

struct GainCurveRow {
    double phi_eps_deg = 0.0;
    double theta_width_deg = 0.0;
    double sigma_ras_deg = 0.0;
    double gain_closed = 0.0; // linear
    double gain_mc = 0.0;     // linear
    double mc_stderr = 0.0;   // linear
};

// Receiver-side average gain (transmit factor fixed to 1: no AoD spread, no AoD error
// and a transmit beam covering the whole domain).
std::vector<GainCurveRow> run_gain_curve(const ScenarioConfig &config, unsigned workers = 1);

// ---------------------------------------------------------------------------
// track-sim
// ---------------------------------------------------------------------------

inline constexpr const char *kTrackerMl = "ml";
inline constexpr const char *kTrackerSector = "sector";
inline constexpr const char *kTrackerBenchmark = "benchmark";

struct Trajectory {
    std::vector<double> times;
    std::vector<ClusterParams> clusters;
};

// Deterministic cluster trajectory (gain 1) from the mobility settings.
Trajectory build_trajectory(const ScenarioConfig &config);

struct TrackPoint {
    double sigma_ras_deg = 0.0;
    double snr_db = 0.0;
};

struct TrackTrial {
    // [tracker][frame], trackers ordered ml, sector, benchmark
    std::vector<std::vector<double>> aoa_est;
    // [tracker][width][frame], dB
    std::vector<std::vector<std::vector<double>>> gain_db;
    // control-phase composite ray AoAs of every frame, for the power profile
    std::vector<std::vector<double>> ray_aoa;
};

struct TrackSimResult {
    Trajectory trajectory;
    std::vector<std::string> trackers;
    std::vector<double> beam_widths_deg;
    std::vector<TrackPoint> points;
    std::vector<std::vector<TrackTrial>> trials; // [point][trial]

    double median_abs_error_deg(std::size_t point, std::size_t trial, std::size_t tracker) const;
    // All frames of all trials, dB.
    std::vector<double> gains_db(std::size_t point, std::size_t tracker, std::size_t width) const;
};

TrackSimResult run_track_sim(const ScenarioConfig &config, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

struct RunOutput {
    std::map<std::string, CsvTable> tables; // table name -> table
    std::string meta;
};

CsvTable crlb_sweep_table(const ScenarioConfig &config, const std::vector<CrlbSweepRow> &rows);
CsvTable gain_curve_table(const ScenarioConfig &config, const std::vector<GainCurveRow> &rows);
RunOutput track_sim_tables(const ScenarioConfig &config, const TrackSimResult &result);

// Runs config.experiment and renders every table plus run_meta text.
RunOutput run_experiment(const ScenarioConfig &config, unsigned workers = 1);

// Writes <dir>/<experiment>_<table>.csv and <dir>/run_meta.txt. Creates dir.
void write_outputs(const ScenarioConfig &config, const RunOutput &output, const std::string &dir);

} // namespace mmtrack::harness
