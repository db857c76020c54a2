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
#include "mmtrack/harness/config.hpp"
#include "mmtrack/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mmtrack::harness {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view value)
{
    std::vector<std::string> items;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = value.find(',', start);
        items.push_back(trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (items.size() == 1 && items[0].empty())
        items.clear();
    return items;
}

double parse_double(const std::string &key, const std::string &text)
{
    double v = 0.0;
    const char *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError("config key '" + key + "': '" + text + "' is not a finite number");
    return v;
}

std::uint64_t parse_uint(const std::string &key, const std::string &text)
{
    std::uint64_t v = 0;
    const char *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("config key '" + key + "': '" + text + "' is not a nonnegative integer");
    return v;
}

std::vector<double> parse_doubles(const std::string &key, const std::string &value)
{
    std::vector<double> out;
    for (const auto &item : split_list(value))
        out.push_back(parse_double(key, item));
    return out;
}

Vec2 parse_vec2(const std::string &key, const std::string &value)
{
    const auto v = parse_doubles(key, value);
    if (v.size() != 2)
        throw ConfigError("config key '" + key + "': expected two comma-separated values (x, y)");
    return {v[0], v[1]};
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::string join(const std::vector<T> &values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i)
            out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += fmt(values[i]);
        else
            out += std::to_string(values[i]);
    }
    return out;
}

std::string mode_name(PathMode m)
{
    return m == PathMode::Los ? "los" : "nlos";
}

} // namespace

std::string to_string(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::CrlbSweep: return "crlb-sweep";
    case ExperimentKind::GainCurve: return "gain-curve";
    case ExperimentKind::TrackSim: return "track-sim";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text)
{
    if (text == "crlb-sweep")
        return ExperimentKind::CrlbSweep;
    if (text == "gain-curve")
        return ExperimentKind::GainCurve;
    if (text == "track-sim")
        return ExperimentKind::TrackSim;
    throw ConfigError("unknown experiment kind '" + std::string(text) + "'");
}

ScenarioConfig ScenarioConfig::defaults(ExperimentKind kind)
{
    ScenarioConfig c;
    c.experiment = kind;
    switch (kind)
    {
    case ExperimentKind::CrlbSweep:
        c.snr_db = {-10, -5, 0, 5, 10, 15, 20, 25, 30};
        c.training_slots = {16, 32};
        c.sigma_ras_deg = {0, 2, 5};
        c.trials = 500;
        break;
    case ExperimentKind::GainCurve:
        c.sigma_ras_deg = {0, 5};
        c.beam_widths_deg = {2, 5, 10, 20, 40};
        c.phi_eps_deg = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 16, 18, 20};
        c.num_rays = 20;
        break;
    case ExperimentKind::TrackSim:
        c.snr_db = {0};
        c.training_slots = {32};
        c.sigma_ras_deg = {0};
        c.beam_widths_deg = {5, 10};
        c.num_rays = 20;
        c.trials = 100;
        c.mobility_segments = {{0.5, {10.0, 0.0}, -50.0}, {0.5, {0.0, 10.0}, 25.0}};
        break;
    }
    return c;
}

void ScenarioConfig::validate() const
{
    auto need = [](bool ok, const std::string &msg) {
        if (!ok)
            throw ConfigError("config: " + msg);
    };
    need(seed.has_value(), "seed is required (no entropy default)");
    need(num_rx >= 1 && num_tx >= 1, "num_rx and num_tx must be at least 1");
    need(trials >= 1, "trials must be at least 1");
    need(num_rays >= 1, "num_rays must be at least 1");
    need(!sigma_ras_deg.empty(), "sigma_ras_deg must not be empty");
    for (double s : sigma_ras_deg)
        need(s >= 0.0 && s < 90.0, "sigma_ras_deg values must be in [0, 90)");
    need(sigma_tas_deg >= 0.0 && sigma_tas_deg < 90.0, "sigma_tas_deg must be in [0, 90)");
    need(ml_grid_deg > 0.0 && ml_window_deg >= ml_grid_deg, "ml_grid_deg must be positive and not exceed ml_window_deg");
    need(ml_inner_iters >= 1 && sweep_ml_iters >= 1, "ML iteration counts must be at least 1");

    switch (experiment)
    {
    case ExperimentKind::CrlbSweep:
        need(!snr_db.empty(), "snr_db must not be empty");
        need(!training_slots.empty(), "training_slots must not be empty");
        for (auto m : training_slots)
            need(m >= 1, "training_slots values must be at least 1");
        need(cluster_angle_limit_deg >= 0.0 && cluster_angle_limit_deg <= 90.0, "cluster_angle_limit_deg must be in [0, 90]");
        need(ml_init_perturb_deg >= 0.0 && ml_init_perturb_deg <= ml_window_deg, "ml_init_perturb_deg must lie inside the search window");
        break;
    case ExperimentKind::GainCurve:
        need(!beam_widths_deg.empty(), "beam_widths_deg must not be empty");
        need(!phi_eps_deg.empty(), "phi_eps_deg must not be empty");
        need(gain_mc_draws >= 1, "gain_mc_draws must be at least 1");
        for (double w : beam_widths_deg)
            need(w > 0.0 && w <= 180.0, "beam_widths_deg values must be in (0, 180]");
        break;
    case ExperimentKind::TrackSim:
        need(!snr_db.empty(), "snr_db must not be empty");
        need(training_slots.size() == 1 && training_slots[0] >= 1, "track-sim takes exactly one training_slots value");
        need(!beam_widths_deg.empty(), "beam_widths_deg must not be empty");
        need(!mobility_segments.empty(), "mobility_segments must not be empty");
        for (const auto &s : mobility_segments)
            need(s.duration_s > 0.0, "mobility segment durations must be positive");
        need(frame_period_s > 0.0, "frame_period_s must be positive");
        need(sector_width_deg > 0.0 && sector_width_deg <= 180.0, "sector_width_deg must be in (0, 180]");
        need(probe_radius >= 1, "probe_radius must be at least 1");
        need(ccdf_step_db > 0.0, "ccdf_step_db must be positive");
        break;
    }
}

std::string ScenarioConfig::canonical() const
{
    std::ostringstream os;
    os << "experiment = " << to_string(experiment) << '\n'
       << "num_rx = " << num_rx << '\n'
       << "num_tx = " << num_tx << '\n'
       << "snr_db = " << join(snr_db) << '\n'
       << "training_slots = " << join(training_slots) << '\n'
       << "sigma_ras_deg = " << join(sigma_ras_deg) << '\n'
       << "sigma_tas_deg = " << fmt(sigma_tas_deg) << '\n'
       << "num_rays = " << num_rays << '\n'
       << "beam_widths_deg = " << join(beam_widths_deg) << '\n'
       << "phi_eps_deg = " << join(phi_eps_deg) << '\n'
       << "trials = " << trials << '\n'
       << "seed = " << (seed ? std::to_string(*seed) : std::string("none")) << '\n'
       << "crlb_draws = " << crlb_draws << '\n'
       << "cluster_angle_limit_deg = " << fmt(cluster_angle_limit_deg) << '\n'
       << "sweep_ml_iters = " << sweep_ml_iters << '\n'
       << "ml_init_perturb_deg = " << fmt(ml_init_perturb_deg) << '\n'
       << "gain_mc_draws = " << gain_mc_draws << '\n'
       << "ml_window_deg = " << fmt(ml_window_deg) << '\n'
       << "ml_grid_deg = " << fmt(ml_grid_deg) << '\n'
       << "ml_inner_iters = " << ml_inner_iters << '\n'
       << "sector_width_deg = " << fmt(sector_width_deg) << '\n'
       << "probe_radius = " << probe_radius << '\n'
       << "frame_period_s = " << fmt(frame_period_s) << '\n'
       << "mobility_mode = " << mode_name(mobility_mode) << '\n';
    std::vector<double> seg;
    for (const auto &s : mobility_segments)
        seg.insert(seg.end(), {s.duration_s, s.velocity.x, s.velocity.y, s.rotation_deg_s});
    os << "mobility_segments = " << join(seg) << '\n'
       << "bs_position = " << fmt(bs_position.x) << ", " << fmt(bs_position.y) << '\n'
       << "ue_position = " << fmt(ue_position.x) << ", " << fmt(ue_position.y) << '\n'
       << "scatterer_position = " << fmt(scatterer_position.x) << ", " << fmt(scatterer_position.y) << '\n'
       << "ue_orientation_deg = " << (ue_orientation_deg ? fmt(*ue_orientation_deg) : std::string("auto")) << '\n'
       << "trace_trials = " << trace_trials << '\n'
       << "ccdf_step_db = " << fmt(ccdf_step_db) << '\n';
    return os.str();
}

std::string ScenarioConfig::hash() const
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : canonical())
    {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ScenarioConfig parse_config(std::string_view text, ExperimentKind kind)
{
    ScenarioConfig c = ScenarioConfig::defaults(kind);

    using Setter = std::function<void(const std::string &, const std::string &)>;
    auto size_setter = [](std::size_t &field) {
        return Setter([&field](const std::string &k, const std::string &v) { field = parse_uint(k, v); });
    };
    auto double_setter = [](double &field) {
        return Setter([&field](const std::string &k, const std::string &v) { field = parse_double(k, v); });
    };
    auto list_setter = [](std::vector<double> &field) {
        return Setter([&field](const std::string &k, const std::string &v) { field = parse_doubles(k, v); });
    };

    const std::map<std::string, Setter> setters = {
        {"experiment", [kind](const std::string &, const std::string &v) {
             if (parse_experiment_kind(v) != kind)
                 throw ConfigError("config: experiment '" + v + "' does not match subcommand '" + to_string(kind) + "'");
         }},
        {"num_rx", size_setter(c.num_rx)},
        {"num_tx", size_setter(c.num_tx)},
        {"snr_db", list_setter(c.snr_db)},
        {"training_slots", [&c](const std::string &k, const std::string &v) {
             c.training_slots.clear();
             for (const auto &item : split_list(v))
                 c.training_slots.push_back(parse_uint(k, item));
         }},
        {"sigma_ras_deg", list_setter(c.sigma_ras_deg)},
        {"sigma_tas_deg", double_setter(c.sigma_tas_deg)},
        {"num_rays", size_setter(c.num_rays)},
        {"beam_widths_deg", list_setter(c.beam_widths_deg)},
        {"phi_eps_deg", list_setter(c.phi_eps_deg)},
        {"trials", size_setter(c.trials)},
        {"seed", [&c](const std::string &k, const std::string &v) { c.seed = parse_uint(k, v); }},
        {"crlb_draws", size_setter(c.crlb_draws)},
        {"cluster_angle_limit_deg", double_setter(c.cluster_angle_limit_deg)},
        {"sweep_ml_iters", size_setter(c.sweep_ml_iters)},
        {"ml_init_perturb_deg", double_setter(c.ml_init_perturb_deg)},
        {"gain_mc_draws", size_setter(c.gain_mc_draws)},
        {"ml_window_deg", double_setter(c.ml_window_deg)},
        {"ml_grid_deg", double_setter(c.ml_grid_deg)},
        {"ml_inner_iters", size_setter(c.ml_inner_iters)},
        {"sector_width_deg", double_setter(c.sector_width_deg)},
        {"probe_radius", size_setter(c.probe_radius)},
        {"frame_period_s", double_setter(c.frame_period_s)},
        {"mobility_mode", [&c](const std::string &, const std::string &v) {
             if (v == "los")
                 c.mobility_mode = PathMode::Los;
             else if (v == "nlos")
                 c.mobility_mode = PathMode::Nlos;
             else
                 throw ConfigError("config key 'mobility_mode': expected los or nlos, got '" + v + "'");
         }},
        {"mobility_segments", [&c](const std::string &k, const std::string &v) {
             const auto flat = parse_doubles(k, v);
             if (flat.size() % 4 != 0)
                 throw ConfigError("config key 'mobility_segments': expected groups of four values "
                                   "(duration_s, vx, vy, rotation_deg_s)");
             c.mobility_segments.clear();
             for (std::size_t i = 0; i < flat.size(); i += 4)
                 c.mobility_segments.push_back({flat[i], {flat[i + 1], flat[i + 2]}, flat[i + 3]});
         }},
        {"bs_position", [&c](const std::string &k, const std::string &v) { c.bs_position = parse_vec2(k, v); }},
        {"ue_position", [&c](const std::string &k, const std::string &v) { c.ue_position = parse_vec2(k, v); }},
        {"scatterer_position", [&c](const std::string &k, const std::string &v) { c.scatterer_position = parse_vec2(k, v); }},
        {"ue_orientation_deg", [&c](const std::string &k, const std::string &v) {
             if (v == "auto")
                 c.ue_orientation_deg.reset();
             else
                 c.ue_orientation_deg = parse_double(k, v);
         }},
        {"trace_trials", size_setter(c.trace_trials)},
        {"ccdf_step_db", double_setter(c.ccdf_step_db)},
    };

    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string content = trim(line);
        if (content.empty())
            continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ConfigError("config line " + std::to_string(line_no) + ": key '" + key + "' given twice");
        it->second(key, value);
    }
    return c;
}

ScenarioConfig load_config(const std::string &path, ExperimentKind kind)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), kind);
}

} // namespace mmtrack::harness
