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

#include "hycov/experiment.hpp"
#include "hycov/analysis.hpp"
#include "hycov/errors.hpp"
#include "hycov/metrics.hpp"
#include "hycov/parallel.hpp"
#include "hycov/recovery.hpp"
#include "hycov/sensing.hpp"
#include "hycov/simulate.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace hycov
{

using json = nlohmann::json;

namespace
{

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();
constexpr double inf_value = std::numeric_limits<double>::infinity();

// ---- algorithm names per experiment ----------------------------------------------------

const std::map<ExperimentKind, std::vector<std::string>> &algorithm_names()
{
    static const std::map<ExperimentKind, std::vector<std::string>> names{
        {ExperimentKind::coherence_cdf, {"s", "s_limit", "ds", "dc", "ds_bound"}},
        {ExperimentKind::success, {"dsomp", "dcomp"}},
        {ExperimentKind::eta_narrowband, {"omp", "somp", "comp", "dsomp", "dcomp"}},
        {ExperimentKind::eta_mimo, {"mode1", "mode2", "mode3", "mode4"}},
        {ExperimentKind::eta_wideband, {"wb_dcomp", "dcomp", "comp", "dsomp", "somp", "omp"}}};
    return names;
}

ExperimentKind kind_from_string(const std::string &s)
{
    for (auto k : {ExperimentKind::coherence_cdf, ExperimentKind::success, ExperimentKind::eta_narrowband,
                   ExperimentKind::eta_mimo, ExperimentKind::eta_wideband})
        if (s == to_string(k))
            return k;
    throw ConfigError("config: field 'experiment': unknown experiment '" + s + "'");
}

// ---- presets -------------------------------------------------------------------------------

struct PresetEntry
{
    const char *name;
    const char *description;
    ExperimentSpec (*make)();
};

ExperimentSpec coherence_base(std::vector<std::string> algs, std::vector<Index> ts, std::vector<Index> los)
{
    ExperimentSpec s;
    s.kind = ExperimentKind::coherence_cdf;
    s.scenario.N = 64;
    s.scenario.D = 64;
    s.scenario.M = 8;
    s.scenario.L = 8;
    s.scenario.on_grid = true;
    s.algorithms = std::move(algs);
    s.t_sweep = std::move(ts);
    s.lo_sweep = std::move(los);
    s.trials = 500;
    return s;
}

ExperimentSpec eta_base(ExperimentKind kind, Index M, double snr_db, std::vector<std::string> algs, std::vector<Index> ts)
{
    ExperimentSpec s;
    s.kind = kind;
    s.scenario.N = 64;
    s.scenario.M = M;
    s.scenario.D = 256;
    s.scenario.L = 8;
    s.scenario.snr_db = snr_db;
    s.scenario.on_grid = false;
    s.algorithms = std::move(algs);
    s.t_sweep = std::move(ts);
    s.trials = 100;
    return s;
}

const std::vector<PresetEntry> &preset_table()
{
    static const std::vector<PresetEntry> table{
        {"fig2", "SOMP coherence CDF over T and L_o, including the T -> infinity limit",
         [] { return coherence_base({"s", "s_limit"}, {1, 4, 8, 64}, {0, 3, 7}); }},
        {"fig3", "DSOMP coherence CDF over T for L_o = 0 and 7, with the closed-form bound",
         [] { return coherence_base({"ds", "ds_bound"}, {1, 4, 8, 64, 1024}, {0, 7}); }},
        {"fig4", "DSOMP against DCOMP coherence CDF at L_o = 7",
         [] { return coherence_base({"ds", "dc"}, {1, 4, 8, 64}, {7}); }},
        {"fig5", "Per-iteration success probability of DSOMP and DCOMP",
         []
         {
             ExperimentSpec s = coherence_base({"dsomp", "dcomp"}, {1, 4, 8, 64}, {0});
             s.kind = ExperimentKind::success;
             return s;
         }},
        {"fig6a", "Narrowband eta and rate loss, M = 16",
         [] { return eta_base(ExperimentKind::eta_narrowband, 16, 10.0, {"omp", "somp", "comp", "dsomp", "dcomp"}, {4, 10, 20, 50, 100}); }},
        {"fig6b", "Narrowband eta and rate loss, M = 8",
         [] { return eta_base(ExperimentKind::eta_narrowband, 8, 10.0, {"omp", "somp", "comp", "dsomp", "dcomp"}, {4, 10, 20, 50, 100}); }},
        {"fig7", "Multi-antenna MS, DCOMP under the four precoder/combiner schedules",
         []
         {
             ExperimentSpec s = eta_base(ExperimentKind::eta_mimo, 8, 0.0, {"mode1", "mode2", "mode3", "mode4"}, {5, 10, 20, 50});
             s.scenario.N_T = s.scenario.N_R = 64;
             s.scenario.M_T = s.scenario.M_R = 8;
             s.scenario.D_T = s.scenario.D_R = 256;
             return s;
         }},
        {"fig8", "Wideband OFDM, WB-DCOMP against direct extensions",
         []
         {
             ExperimentSpec s = eta_base(ExperimentKind::eta_wideband, 8, 0.0, {"wb_dcomp", "dcomp", "comp", "dsomp", "somp"}, {5, 10, 20, 50});
             s.scenario.K = 128;
             s.scenario.N_cp = 32;
             return s;
         }},
    };
    return table;
}

// ---- JSON helpers ----------------------------------------------------------------------------

[[noreturn]] void schema_error(const std::string &field, const std::string &reason)
{
    throw ConfigError("config: field '" + field + "': " + reason);
}

Index get_count(const json &j, const std::string &field, Index min_value)
{
    if (!j.is_number_integer())
        schema_error(field, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < min_value)
        schema_error(field, "must be >= " + std::to_string(min_value));
    return static_cast<Index>(v);
}

double get_real(const json &j, const std::string &field)
{
    if (!j.is_number())
        schema_error(field, "expected a number");
    return j.get<double>();
}

std::vector<Index> get_counts(const json &j, const std::string &field, Index min_value)
{
    if (!j.is_array() || j.empty())
        schema_error(field, "expected a non-empty array of integers");
    std::vector<Index> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_count(j[i], field + "[" + std::to_string(i) + "]", min_value));
    return out;
}

std::vector<double> get_reals(const json &j, const std::string &field)
{
    if (!j.is_array() || j.empty())
        schema_error(field, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_real(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

void apply_scenario(const json &j, ScenarioConfig &s)
{
    if (!j.is_object())
        schema_error("scenario", "expected an object");
    const std::map<std::string, Index *> counts{{"N", &s.N},     {"M", &s.M},     {"D", &s.D},     {"L", &s.L},
                                                {"N_T", &s.N_T}, {"M_T", &s.M_T}, {"D_T", &s.D_T}, {"N_R", &s.N_R},
                                                {"M_R", &s.M_R}, {"D_R", &s.D_R}, {"K", &s.K},     {"N_cp", &s.N_cp}};
    for (const auto &[key, value] : j.items())
    {
        const std::string field = "scenario." + key;
        if (auto it = counts.find(key); it != counts.end())
            *it->second = get_count(value, field, 1);
        else if (key == "snr_db")
            s.snr_db = get_real(value, field);
        else if (key == "on_grid")
        {
            if (!value.is_boolean())
                schema_error(field, "expected true or false");
            s.on_grid = value.get<bool>();
        }
        else if (key == "T")
            schema_error(field, "snapshot counts are given by t_sweep");
        else
            schema_error(field, "unknown key");
    }
}

// ---- statistics ----------------------------------------------------------------------------

struct Summary
{
    double mean = 0.0;
    double stderr_ = 0.0;
};

// values[i * stride + offset], i = 0..n-1, summed in trial order
Summary summarize(const std::vector<double> &values, std::size_t n, std::size_t stride, std::size_t offset)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sum += values[i * stride + offset];
    const double mean = sum / static_cast<double>(n);
    if (n < 2)
        return {mean, nan_value};
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double d = values[i * stride + offset] - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n))};
}

double binomial_stderr(double p, Index n)
{
    return n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : nan_value;
}

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string label(const std::string &alg, const char *tag, double value, bool tagged)
{
    return tagged ? alg + "@" + tag + "=" + format_number(value) : alg;
}

// ---- runners -------------------------------------------------------------------------------

struct Emitter
{
    const ExperimentSpec &spec;
    ResultTable &table;

    void row(const std::string &alg, const std::string &sweep, double value, const std::string &metric, double mean,
             double se, Index trials) const
    {
        table.rows.push_back({spec.preset, alg, sweep, value, metric, mean, se, trials, spec.scenario.seed});
    }
};

void run_coherence(const ExperimentSpec &spec, const Emitter &out, std::string &where)
{
    const bool tagged = spec.lo_sweep.size() > 1;
    for (const auto &alg : spec.algorithms)
        for (Index lo : spec.lo_sweep)
        {
            const std::string name = label(alg, "Lo", static_cast<double>(lo), tagged);
            const bool t_free = alg == "s_limit" || alg == "ds_bound";
            const std::vector<Index> ts = t_free ? std::vector<Index>{1} : spec.t_sweep;
            for (Index T : ts)
            {
                where = name + ", T=" + std::to_string(T);
                const CoherenceParams p{spec.scenario.N, spec.scenario.M, spec.scenario.L, lo, T};
                const CoherenceKind kind = alg == "s"         ? CoherenceKind::s
                                           : alg == "s_limit" ? CoherenceKind::s_limit
                                           : alg == "ds"      ? CoherenceKind::ds
                                           : alg == "dc"      ? CoherenceKind::dc
                                                              : CoherenceKind::ds_bound;
                const EmpiricalCdf cdf = mc_cdf(kind, p, spec.trials, spec.scenario.seed, spec.threads);
                const double tv = t_free ? inf_value : static_cast<double>(T);
                const double pr = cdf.fraction_below(1.0);
                out.row(name, "T", tv, "rho_mean", cdf.mean(), cdf.stddev() / std::sqrt(static_cast<double>(spec.trials)), spec.trials);
                out.row(name, "T", tv, "rho_std", cdf.stddev(), nan_value, spec.trials);
                out.row(name, "T", tv, "pr_rho_lt_1", pr, binomial_stderr(pr, spec.trials), spec.trials);
                for (int q : {10, 25, 50, 75, 90})
                    out.row(name, "T", tv, "p" + std::to_string(q), cdf.quantile(q / 100.0), nan_value, spec.trials);
            }
        }
}

void run_success(const ExperimentSpec &spec, const Emitter &out, std::string &where)
{
    for (const auto &alg : spec.algorithms)
        for (Index T : spec.t_sweep)
        {
            where = alg + ", T=" + std::to_string(T);
            const CoherenceParams p{spec.scenario.N, spec.scenario.M, spec.scenario.L, 0, T};
            const auto a = alg == "dsomp" ? GreedyAlgorithm::dsomp : GreedyAlgorithm::dcomp;
            const IterationSuccess s = success_prob_per_iteration(a, p, spec.trials, spec.scenario.seed, spec.threads);
            for (std::size_t n = 0; n < s.attempts.size(); ++n)
                out.row(alg, "T", static_cast<double>(T), "success_iter" + std::to_string(n + 1), s.rate(n),
                        binomial_stderr(s.rate(n), s.attempts[n]), s.attempts[n]);
            const double full = s.full_recovery(spec.trials);
            out.row(alg, "T", static_cast<double>(T), "full_recovery", full, binomial_stderr(full, spec.trials), spec.trials);
        }
}

// Per-trial eta and rate loss for every (snr, algorithm, T); emitted with the same layout
// by all three eta experiments.
struct EtaGrid
{
    std::size_t n_snr, n_alg, n_t;
    std::size_t stride() const { return n_snr * n_alg * n_t * 2; }
    std::size_t at(std::size_t s, std::size_t a, std::size_t t, std::size_t metric) const
    {
        return ((s * n_alg + a) * n_t + t) * 2 + metric;
    }
};

struct EtaValue
{
    double eta;
    double loss_pct;
};

EtaValue evaluate(const CovarianceEstimate &est, const ComplexMatrix &A, const HermitianMatrix &R, double ideal,
                  const ComplexMatrix &U_ideal, double snr_db)
{
    const ComplexMatrix U = dominant_eigenvectors(channel_covariance(est, A), U_ideal.cols());
    return {efficiency_eta(U, R, ideal), rate_loss(U, U_ideal, R, snr_db).loss_pct};
}

std::vector<OperatorPtr> first_ops(const SensingEnsemble &ens, Index T)
{
    std::vector<OperatorPtr> ops;
    for (Index t = 0; t < T; ++t)
        ops.push_back(ens.op(t));
    return ops;
}

std::vector<ComplexMatrix> first_frames(const MeasurementSet &m, Index T)
{
    return {m.frames.begin(), m.frames.begin() + T};
}

ComplexMatrix stacked_columns(const MeasurementSet &m, Index T)
{
    Index cols = 0;
    for (Index t = 0; t < T; ++t)
        cols += m.frames[static_cast<std::size_t>(t)].cols();
    ComplexMatrix out(m.frames.front().rows(), cols);
    Index c = 0;
    for (Index t = 0; t < T; ++t)
    {
        const auto &f = m.frames[static_cast<std::size_t>(t)];
        out.middleCols(c, f.cols()) = f;
        c += f.cols();
    }
    return out;
}

CovarianceEstimate single_antenna_estimate(const std::string &alg, const SensingEnsemble &fixed, const MeasurementSet &mf,
                                           const SensingEnsemble &tv, const MeasurementSet &mt, Index T, Index L,
                                           bool wideband)
{
    const ComplexMatrix &phi0 = fixed.phi(0);
    if (alg == "omp")
        return reconstruct_covariance(omp_snapshots(phi0, stacked_columns(mf, T), L));
    if (alg == "somp")
        return reconstruct_covariance(somp(phi0, stacked_columns(mf, T), L));
    if (alg == "comp")
        return comp(phi0, stacked_columns(mf, T), L);
    if (alg == "dsomp")
        return reconstruct_covariance(dsomp(first_ops(tv, T), first_frames(mt, T), L));
    if (alg == "dcomp")
        return dcomp(first_ops(tv, T), first_frames(mt, T), L);
    if (alg == "wb_dcomp" && wideband)
        return wb_dcomp(first_ops(tv, T), first_frames(mt, T), L);
    throw ConfigError("unknown algorithm '" + alg + "'");
}

void emit_eta(const ExperimentSpec &spec, const Emitter &out, const EtaGrid &g, const std::vector<double> &values)
{
    const auto n = static_cast<std::size_t>(spec.trials);
    const bool tagged = spec.snr_sweep.size() > 1;
    for (std::size_t a = 0; a < g.n_alg; ++a)
        for (std::size_t s = 0; s < g.n_snr; ++s)
        {
            const std::string name = label(spec.algorithms[a], "snr", spec.snr_sweep[s], tagged);
            for (std::size_t t = 0; t < g.n_t; ++t)
            {
                const double tv = static_cast<double>(spec.t_sweep[t]);
                const Summary eta = summarize(values, n, g.stride(), g.at(s, a, t, 0));
                const Summary loss = summarize(values, n, g.stride(), g.at(s, a, t, 1));
                out.row(name, "T", tv, "eta", eta.mean, eta.stderr_, spec.trials);
                out.row(name, "T", tv, "rate_loss_pct", loss.mean, loss.stderr_, spec.trials);
            }
        }
}

void run_eta_single(const ExperimentSpec &spec, const Emitter &out, std::string &where, bool wideband)
{
    const Index T_max = *std::max_element(spec.t_sweep.begin(), spec.t_sweep.end());
    ScenarioConfig cfg = spec.scenario;
    cfg.T = T_max;
    const Dictionary dict = build_dictionary(cfg.N, cfg.D);
    const EtaGrid g{spec.snr_sweep.size(), spec.algorithms.size(), spec.t_sweep.size()};
    std::vector<double> values(static_cast<std::size_t>(spec.trials) * g.stride());
    where = "trials";

    for_each_trial(spec.trials, spec.threads,
                   [&](std::int64_t trial)
                   {
                       Rng rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(trial));
                       const SparseChannelRealization ch = wideband ? draw_wideband_channel(cfg, rng) : draw_channel(cfg, rng);
                       const HermitianMatrix R = wideband ? wideband_population_covariance(ch, cfg.N)
                                                          : population_covariance(ch, cfg.N);
                       const EigenDecomposition eig = eig_hermitian(R);
                       const double ideal = eig.values.head(cfg.L).sum();
                       const ComplexMatrix U_ideal = eig.vectors.leftCols(cfg.L);
                       const SensingEnsemble fixed = make_ensemble(cfg.M, dict, T_max, false, rng);
                       const SensingEnsemble tv = make_ensemble(cfg.M, dict, T_max, true, rng);
                       double *row = values.data() + static_cast<std::size_t>(trial) * g.stride();
                       for (std::size_t s = 0; s < g.n_snr; ++s)
                       {
                           const double snr = spec.snr_sweep[s];
                           const MeasurementSet mf = wideband ? simulate_wideband(ch, fixed, snr, rng) : simulate_narrowband(ch, fixed, snr, rng);
                           const MeasurementSet mt = wideband ? simulate_wideband(ch, tv, snr, rng) : simulate_narrowband(ch, tv, snr, rng);
                           for (std::size_t a = 0; a < g.n_alg; ++a)
                               for (std::size_t t = 0; t < g.n_t; ++t)
                               {
                                   const auto est = single_antenna_estimate(spec.algorithms[a], fixed, mf, tv, mt,
                                                                            spec.t_sweep[t], cfg.L, wideband);
                                   const EtaValue v = evaluate(est, dict.A, R, ideal, U_ideal, snr);
                                   row[g.at(s, a, t, 0)] = v.eta;
                                   row[g.at(s, a, t, 1)] = v.loss_pct;
                               }
                       }
                   });
    emit_eta(spec, out, g, values);
}

void run_eta_mimo(const ExperimentSpec &spec, const Emitter &out, std::string &where)
{
    const Index T_max = *std::max_element(spec.t_sweep.begin(), spec.t_sweep.end());
    ScenarioConfig cfg = spec.scenario;
    cfg.T = T_max;
    const Dictionary rx = build_dictionary(cfg.N_R, cfg.D_R), tx = build_dictionary(cfg.N_T, cfg.D_T);
    const EtaGrid g{spec.snr_sweep.size(), spec.algorithms.size(), spec.t_sweep.size()};
    std::vector<double> values(static_cast<std::size_t>(spec.trials) * g.stride());
    where = "trials";

    for_each_trial(spec.trials, spec.threads,
                   [&](std::int64_t trial)
                   {
                       Rng rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(trial));
                       const SparseChannelRealization ch = draw_mimo_channel(cfg, rng);
                       const SideCovariances truth = mimo_true_side_covariances(ch, cfg.N_R, cfg.N_T);
                       const EigenDecomposition eig_r = eig_hermitian(truth.rx), eig_t = eig_hermitian(truth.tx);
                       const double ideal_r = eig_r.values.head(cfg.L).sum(), ideal_t = eig_t.values.head(cfg.L).sum();
                       const ComplexMatrix U_r = eig_r.vectors.leftCols(cfg.L), U_t = eig_t.vectors.leftCols(cfg.L);
                       double *row = values.data() + static_cast<std::size_t>(trial) * g.stride();
                       for (std::size_t a = 0; a < g.n_alg; ++a)
                       {
                           const auto mode = static_cast<MimoMode>(spec.algorithms[a].back() - '0');
                           std::vector<MimoFrameSchedule> sched;
                           std::vector<OperatorPtr> ops;
                           for (Index t = 0; t < T_max; ++t)
                           {
                               sched.push_back(draw_mimo_schedule(mode, cfg.M_T, cfg.M_R, cfg.N_R, cfg.N_T, rng));
                               ops.push_back(mimo_operator(sched.back(), tx.A, rx.A));
                           }
                           for (std::size_t s = 0; s < g.n_snr; ++s)
                           {
                               const double snr = spec.snr_sweep[s];
                               const MeasurementSet m = simulate_mimo(ch, sched, cfg.N_R, cfg.N_T, snr, rng);
                               for (std::size_t t = 0; t < g.n_t; ++t)
                               {
                                   const Index T = spec.t_sweep[t];
                                   const std::vector<OperatorPtr> sub(ops.begin(), ops.begin() + T);
                                   const CovarianceEstimate est = dcomp(sub, first_frames(m, T), cfg.L);
                                   const SideCovariances side = mimo_side_covariances(est, rx.A, tx.A);
                                   const ComplexMatrix Ur_hat = dominant_eigenvectors(side.rx, cfg.L);
                                   const ComplexMatrix Ut_hat = dominant_eigenvectors(side.tx, cfg.L);
                                   const double eta = 0.5 * (efficiency_eta(Ur_hat, truth.rx, ideal_r) +
                                                             efficiency_eta(Ut_hat, truth.tx, ideal_t));
                                   const double lr = rate_loss(Ur_hat, U_r, truth.rx, snr).loss_pct;
                                   const double lt = rate_loss(Ut_hat, U_t, truth.tx, snr).loss_pct;
                                   row[g.at(s, a, t, 0)] = eta;
                                   row[g.at(s, a, t, 1)] = 0.5 * (lr + lt);
                               }
                           }
                       }
                   });
    emit_eta(spec, out, g, values);
}

ScenarioKind scenario_kind(ExperimentKind k)
{
    switch (k)
    {
    case ExperimentKind::eta_mimo: return ScenarioKind::mimo;
    case ExperimentKind::eta_wideband: return ScenarioKind::wideband;
    default: return ScenarioKind::narrowband;
    }
}

// ---- CSV -----------------------------------------------------------------------------------

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s)
    {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        const char c = line[i];
        if (quoted)
        {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                out.back() += '"', ++i;
            else if (c == '"')
                quoted = false;
            else
                out.back() += c;
        }
        else if (c == '"')
            quoted = true;
        else if (c == ',')
            out.emplace_back();
        else
            out.back() += c;
    }
    return out;
}

template <typename T>
T parse_field(const std::string &s, std::size_t line)
{
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("csv: line " + std::to_string(line) + ": cannot parse '" + s + "'");
    return v;
}

} // namespace

// ---- public API ----------------------------------------------------------------------------

const char *to_string(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::coherence_cdf: return "coherence_cdf";
    case ExperimentKind::success: return "success";
    case ExperimentKind::eta_narrowband: return "eta_narrowband";
    case ExperimentKind::eta_mimo: return "eta_mimo";
    case ExperimentKind::eta_wideband: return "eta_wideband";
    }
    return "unknown";
}

void ExperimentSpec::validate() const
{
    if (trials < 1)
        schema_error("trials", "must be >= 1");
    if (threads < 1)
        schema_error("threads", "must be >= 1");
    if (t_sweep.empty())
        schema_error("t_sweep", "must not be empty");
    for (Index t : t_sweep)
        if (t < 1)
            schema_error("t_sweep", "entries must be >= 1");
    if (snr_sweep.empty())
        schema_error("snr_sweep", "must not be empty");
    if (algorithms.empty())
        schema_error("algorithms", "must not be empty");
    const auto &allowed = algorithm_names().at(kind);
    std::set<std::string> seen;
    for (const auto &a : algorithms)
    {
        if (std::find(allowed.begin(), allowed.end(), a) == allowed.end())
            schema_error("algorithms", "'" + a + "' is not available for experiment " + to_string(kind));
        if (!seen.insert(a).second)
            schema_error("algorithms", "'" + a + "' listed twice");
    }

    if (kind == ExperimentKind::coherence_cdf || kind == ExperimentKind::success)
    {
        if (lo_sweep.empty())
            schema_error("lo_sweep", "must not be empty");
        for (Index lo : lo_sweep)
            if (lo < 0 || lo >= scenario.L)
                schema_error("lo_sweep", "entries must satisfy 0 <= L_o < L");
        if (!(scenario.N >= scenario.M && scenario.M >= scenario.L && scenario.L >= 1))
            schema_error("scenario", "requires N >= M >= L >= 1");
        for (const auto &a : algorithms)
            if (a == "ds_bound" && scenario.N == scenario.M)
                schema_error("algorithms", "ds_bound is degenerate for N == M");
        return;
    }
    ScenarioConfig s = scenario;
    s.T = *std::max_element(t_sweep.begin(), t_sweep.end());
    s.validate(scenario_kind(kind));
}

std::vector<PresetInfo> list_presets()
{
    std::vector<PresetInfo> out;
    for (const auto &p : preset_table())
        out.push_back({p.name, p.description});
    out.push_back({"custom", "User-defined experiment; requires the 'experiment' field"});
    return out;
}

ExperimentSpec preset_spec(const std::string &name)
{
    for (const auto &p : preset_table())
        if (name == p.name)
        {
            ExperimentSpec s = p.make();
            s.preset = name;
            s.snr_sweep = {s.scenario.snr_db};
            return s;
        }
    throw ConfigError("config: field 'preset': unknown preset '" + name + "'");
}

ExperimentSpec parse_config(const std::string &text)
{
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw ConfigError("config: missing root object (file is empty)");
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config: root must be a JSON object");

    static const std::set<std::string> known{"schema", "preset",    "experiment", "scenario", "algorithms", "trials",
                                             "seed",   "t_sweep",   "snr_sweep",  "lo_sweep", "output",     "threads"};
    for (const auto &[key, value] : j.items())
        if (!known.count(key))
            schema_error(key, "unknown key");

    if (j.contains("schema") && (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1))
        schema_error("schema", "only schema version 1 is supported");

    std::string preset = "custom";
    if (j.contains("preset"))
    {
        if (!j["preset"].is_string())
            schema_error("preset", "expected a string");
        preset = j["preset"].get<std::string>();
    }

    ExperimentSpec spec;
    if (preset == "custom")
    {
        if (!j.contains("experiment"))
            schema_error("experiment", "required when preset is 'custom'");
        spec.preset = "custom";
    }
    else
        spec = preset_spec(preset);

    if (j.contains("experiment"))
    {
        if (!j["experiment"].is_string())
            schema_error("experiment", "expected a string");
        const ExperimentKind k = kind_from_string(j["experiment"].get<std::string>());
        if (preset != "custom" && k != spec.kind)
            schema_error("experiment", "preset '" + preset + "' runs " + to_string(spec.kind));
        spec.kind = k;
    }

    const double preset_snr = spec.scenario.snr_db;
    if (j.contains("scenario"))
        apply_scenario(j["scenario"], spec.scenario);
    if (j.contains("seed"))
    {
        if (!j["seed"].is_number_unsigned())
            schema_error("seed", "expected a non-negative integer");
        spec.scenario.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("algorithms"))
    {
        const json &a = j["algorithms"];
        if (!a.is_array() || a.empty())
            schema_error("algorithms", "expected a non-empty array of strings");
        spec.algorithms.clear();
        for (const auto &e : a)
        {
            if (!e.is_string())
                schema_error("algorithms", "expected a non-empty array of strings");
            spec.algorithms.push_back(e.get<std::string>());
        }
    }
    if (j.contains("trials"))
        spec.trials = get_count(j["trials"], "trials", 0);
    if (j.contains("threads"))
        spec.threads = static_cast<unsigned>(get_count(j["threads"], "threads", 1));
    if (j.contains("t_sweep"))
        spec.t_sweep = get_counts(j["t_sweep"], "t_sweep", 0);
    if (j.contains("lo_sweep"))
        spec.lo_sweep = get_counts(j["lo_sweep"], "lo_sweep", 0);
    if (j.contains("snr_sweep"))
        spec.snr_sweep = get_reals(j["snr_sweep"], "snr_sweep");
    else if (spec.snr_sweep.empty() || spec.scenario.snr_db != preset_snr)
        spec.snr_sweep = {spec.scenario.snr_db};
    if (j.contains("output"))
    {
        if (!j["output"].is_string())
            schema_error("output", "expected a string");
        spec.output_path = j["output"].get<std::string>();
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("config: cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void run_experiment(const ExperimentSpec &spec, ResultTable &table)
{
    spec.validate();
    const Emitter out{spec, table};
    std::string where = "setup";
    try
    {
        switch (spec.kind)
        {
        case ExperimentKind::coherence_cdf: run_coherence(spec, out, where); break;
        case ExperimentKind::success: run_success(spec, out, where); break;
        case ExperimentKind::eta_narrowband: run_eta_single(spec, out, where, false); break;
        case ExperimentKind::eta_wideband: run_eta_single(spec, out, where, true); break;
        case ExperimentKind::eta_mimo: run_eta_mimo(spec, out, where); break;
        }
    }
    catch (...)
    {
        table.rows.push_back({spec.preset, "FAILED", where, nan_value, "FAILED", nan_value, nan_value, 0, spec.scenario.seed});
        throw;
    }
}

ResultTable run_experiment(const ExperimentSpec &spec)
{
    ResultTable t;
    run_experiment(spec, t);
    return t;
}

std::string format_csv(const ResultTable &table)
{
    std::string s = std::string(csv_header) + "\n";
    for (const auto &r : table.rows)
    {
        s += csv_field(r.preset) + ',' + csv_field(r.algorithm) + ',' + csv_field(r.sweep_name) + ',' +
             format_number(r.sweep_value) + ',' + csv_field(r.metric) + ',' + format_number(r.mean) + ',' +
             format_number(r.stderr_) + ',' + std::to_string(r.trials) + ',' + std::to_string(r.seed) + '\n';
    }
    return s;
}

void emit_csv(const ResultTable &table, const std::filesystem::path &path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    const std::string s = format_csv(table);
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!f)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

ResultTable parse_csv(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw std::runtime_error("csv: missing or unexpected header");
    ResultTable t;
    std::size_t n = 1;
    while (std::getline(in, line))
    {
        ++n;
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != 9)
            throw std::runtime_error("csv: line " + std::to_string(n) + ": expected 9 fields");
        t.rows.push_back({f[0], f[1], f[2], parse_field<double>(f[3], n), f[4], parse_field<double>(f[5], n),
                          parse_field<double>(f[6], n), static_cast<Index>(parse_field<std::int64_t>(f[7], n)),
                          parse_field<std::uint64_t>(f[8], n)});
    }
    return t;
}

ResultTable read_csv(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

} // namespace hycov
