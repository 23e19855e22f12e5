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

#ifndef HYCOV_EXPERIMENT_HPP
#define HYCOV_EXPERIMENT_HPP

#include "hycov/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hycov
{

enum class ExperimentKind
{
    coherence_cdf,  // rho metrics over T and L_o
    success,        // per-iteration success probability over T
    eta_narrowband, // single-antenna MS, eta and rate loss over T
    eta_mimo,       // multi-antenna MS, DCOMP under schedules 1-4
    eta_wideband    // OFDM, WB-DCOMP against direct extensions
};

struct ExperimentSpec
{
    std::string preset = "custom";
    ExperimentKind kind = ExperimentKind::eta_narrowband;
    ScenarioConfig scenario;
    std::vector<std::string> algorithms;
    Index trials = 100;
    std::vector<Index> t_sweep;
    std::vector<double> snr_sweep;
    std::vector<Index> lo_sweep{0};
    std::string output_path;
    unsigned threads = 1;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

struct PresetInfo
{
    std::string name;
    std::string description;
};

std::vector<PresetInfo> list_presets();

ExperimentSpec preset_spec(const std::string &name);

// Parses a JSON config. Unknown keys, wrong types and invariant violations raise ConfigError.
ExperimentSpec parse_config(const std::string &text);
ExperimentSpec load_config(const std::filesystem::path &path);

const char *to_string(ExperimentKind kind);

struct ResultRow
{
    std::string preset;
    std::string algorithm;
    std::string sweep_name;
    double sweep_value = 0.0;
    std::string metric;
    double mean = 0.0;
    double stderr_ = 0.0;
    Index trials = 0;
    std::uint64_t seed = 0;

    bool operator==(const ResultRow &) const = default;
};

struct ResultTable
{
    std::vector<ResultRow> rows;
};

// Appends rows to `table` as sweep points complete. On error a row with metric "FAILED"
// is appended before the exception propagates.
void run_experiment(const ExperimentSpec &spec, ResultTable &table);
ResultTable run_experiment(const ExperimentSpec &spec);

inline constexpr const char *csv_header = "preset,algorithm,sweep_name,sweep_value,metric,mean,stderr,trials,seed";

std::string format_csv(const ResultTable &table);
void emit_csv(const ResultTable &table, const std::filesystem::path &path);
ResultTable parse_csv(const std::string &text);
ResultTable read_csv(const std::filesystem::path &path);

} // namespace hycov

#endif
