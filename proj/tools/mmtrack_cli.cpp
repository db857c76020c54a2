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
#include "mmtrack/harness/config.hpp"
#include "mmtrack/harness/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    unsigned workers = 0;
};

int run(mmtrack::harness::ExperimentKind kind, const RunOptions &opt)
{
    using namespace mmtrack::harness;
    ScenarioConfig config = opt.config_path.empty() ? ScenarioConfig::defaults(kind) : load_config(opt.config_path, kind);
    if (opt.seed)
        config.seed = opt.seed;
    if (opt.trials)
        config.trials = *opt.trials;
    config.validate();

    const unsigned workers = opt.workers ? opt.workers : std::max(1U, std::thread::hardware_concurrency());
    const RunOutput output = run_experiment(config, workers);
    write_outputs(config, output, opt.out_dir);
    std::cerr << to_string(kind) << ": wrote " << output.tables.size() << " table(s) to " << opt.out_dir
              << " (config " << config.hash() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    using mmtrack::harness::ExperimentKind;

    CLI::App app{"mmWave cluster tracking experiments"};
    app.set_version_flag("--version", mmtrack::harness::kToolkitVersion);
    app.require_subcommand(1);

    RunOptions opt;
    std::optional<ExperimentKind> selected;
    const std::pair<const char *, ExperimentKind> commands[] = {
        {"crlb-sweep", ExperimentKind::CrlbSweep},
        {"gain-curve", ExperimentKind::GainCurve},
        {"track-sim", ExperimentKind::TrackSim},
    };
    for (const auto &[name, kind] : commands)
    {
        CLI::App *sub = app.add_subcommand(name, "run the " + std::string(name) + " experiment");
        sub->add_option("--config", opt.config_path, "key = value configuration file (defaults if omitted)")
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", opt.seed, "master seed override");
        sub->add_option("--trials", opt.trials, "trial count override")->check(CLI::PositiveNumber);
        sub->add_option("--workers", opt.workers, "worker threads (0: hardware concurrency)");
        sub->callback([&selected, kind = kind] { selected = kind; });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        return run(*selected, opt);
    }
    catch (const mmtrack::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const mmtrack::NumericalError &e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    catch (const mmtrack::DomainError &e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
