// SPDX-License-Identifier: Apache-2.0
//
// hycov: spatial channel covariance estimation for hybrid MIMO receivers
// Copyright (C) 2026 The hycov authors
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

#include "hycov/errors.hpp"
#include "hycov/experiment.hpp"
#include "selftest.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace
{

constexpr int exit_config = 1;
constexpr int exit_runtime = 2;

int cmd_run(const std::string &config, std::optional<std::uint64_t> seed, std::optional<long> trials,
            std::optional<std::string> out, std::optional<unsigned> threads)
{
    hycov::ExperimentSpec spec;
    try
    {
        spec = hycov::load_config(config);
        if (seed)
            spec.scenario.seed = *seed;
        if (trials)
            spec.trials = *trials;
        if (threads)
            spec.threads = *threads;
        if (out)
            spec.output_path = *out;
        spec.validate();
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }

    hycov::ResultTable table;
    int code = 0;
    try
    {
        hycov::run_experiment(spec, table);
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        code = exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        code = exit_runtime;
    }

    try
    {
        if (spec.output_path.empty())
            std::cout << hycov::format_csv(table);
        else
            hycov::emit_csv(table, spec.output_path);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return code;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hycov - spatial channel covariance estimation experiments"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    auto *run = app.add_subcommand("run", "Run an experiment described by a JSON config and write CSV");
    run->add_option("config", config, "Path to the JSON config")->required();
    run->add_option("--seed", seed, "Override the experiment seed");
    run->add_option("--trials", trials, "Override the number of Monte Carlo trials");
    run->add_option("--out", out, "Write CSV here instead of the config's output (stdout if neither)");
    run->add_option("--threads", threads, "Worker threads");

    auto *presets = app.add_subcommand("list-presets", "List the built-in presets");
    auto *selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    if (*run)
        return cmd_run(config, seed, trials, out, threads);
    if (*presets)
    {
        for (const auto &p : hycov::list_presets())
            std::cout << p.name << "\t" << p.description << '\n';
        return 0;
    }
    if (*selftest)
        return hycov::cli::run_selftest(std::cout) ? 0 : exit_runtime;
    return exit_config;
}
