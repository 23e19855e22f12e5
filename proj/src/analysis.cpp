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

#include "hycov/analysis.hpp"
#include "hycov/channel.hpp"
#include "hycov/errors.hpp"
#include "hycov/parallel.hpp"
#include "hycov/recovery.hpp"
#include "hycov/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hycov
{

namespace
{

void check_supports(std::span<const Index> S, std::span<const Index> S_o, Index D)
{
    for (Index j : S)
        if (j < 0 || j >= D)
            throw ArgumentError("coherence metric: support index " + std::to_string(j) + " out of range");
    for (Index j : S_o)
        if (std::find(S.begin(), S.end(), j) == S.end())
            throw ArgumentError("coherence metric: S_o is not a subset of S (index " + std::to_string(j) + ")");
    if (S_o.size() >= S.size())
        throw ArgumentError("coherence metric: need |S_o| < |S|");
}

std::vector<char> membership(std::span<const Index> idx, Index D)
{
    std::vector<char> in(static_cast<std::size_t>(D), 0);
    for (Index j : idx)
        in[static_cast<std::size_t>(j)] = 1;
    return in;
}

// max over N\S divided by max over S\S_o
double ratio_of_maxima(const RealVector &stat, std::span<const Index> S, std::span<const Index> S_o)
{
    const Index D = stat.size();
    const auto in_s = membership(S, D), in_so = membership(S_o, D);
    double num = 0.0, den = 0.0;
    for (Index j = 0; j < D; ++j)
    {
        if (!in_s[static_cast<std::size_t>(j)])
            num = std::max(num, stat(j));
        else if (!in_so[static_cast<std::size_t>(j)])
            den = std::max(den, stat(j));
    }
    if (den <= 0.0)
        return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return num / den;
}

ComplexMatrix so_projector(const ComplexMatrix &Phi, std::span<const Index> S_o)
{
    if (S_o.empty())
        return ComplexMatrix::Zero(Phi.rows(), Phi.rows());
    return projector(select_columns(Phi, S_o));
}

void check_snapshots(const std::vector<ComplexMatrix> &Phis, const ComplexMatrix &G, std::span<const Index> S)
{
    if (Phis.empty())
        throw DimensionError("coherence metric: no sensing matrices");
    if (G.rows() != static_cast<Index>(S.size()))
        throw DimensionError("coherence metric: G has " + std::to_string(G.rows()) + " rows for |S| = " +
                             std::to_string(S.size()));
    if (Phis.size() != 1 && static_cast<Index>(Phis.size()) != G.cols())
        throw DimensionError("coherence metric: " + std::to_string(Phis.size()) + " sensing matrices for " +
                             std::to_string(G.cols()) + " snapshots");
}

enum class Statistic
{
    ds,
    dc
};

double rho_generic(Statistic kind, std::span<const Index> S, std::span<const Index> S_o,
                   const std::vector<ComplexMatrix> &Phis, const ComplexMatrix &G)
{
    check_snapshots(Phis, G, S);
    const Index D = Phis.front().cols();
    check_supports(S, S_o, D);

    RealVector stat = RealVector::Zero(D);
    const auto accumulate = [&](const ComplexMatrix &Phi, const ComplexMatrix &g)
    {
        const ComplexMatrix P = so_projector(Phi, S_o);
        const ComplexMatrix x = select_columns(Phi, S) * g;
        const ComplexMatrix px = P * x;
        if (kind == Statistic::ds)
            stat += (Phi.adjoint() * (x - px)).rowwise().squaredNorm();
        else
            stat += (Phi.adjoint() * x).rowwise().squaredNorm() - (Phi.adjoint() * px).rowwise().squaredNorm();
    };
    if (Phis.size() == 1)
        accumulate(Phis.front(), G);
    else
        for (Index t = 0; t < G.cols(); ++t)
            accumulate(Phis[static_cast<std::size_t>(t)], G.col(t));
    return ratio_of_maxima(stat, S, S_o);
}

std::vector<Index> sample_subset(std::span<const Index> pool_in, Index k, Rng &rng)
{
    std::vector<Index> pool(pool_in.begin(), pool_in.end());
    const auto n = static_cast<Index>(pool.size());
    for (Index i = 0; i < k; ++i)
    {
        std::uniform_int_distribution<Index> pick(i, n - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

struct AnalysisDraw
{
    std::vector<Index> S, S_o;
    SensingEnsemble ens;
    ComplexMatrix G;
};

AnalysisDraw draw_instance(const CoherenceParams &p, Rng &rng)
{
    AnalysisDraw d;
    std::vector<Index> all(static_cast<std::size_t>(p.N));
    std::iota(all.begin(), all.end(), Index{0});
    d.S = sample_subset(all, p.L, rng);
    d.S_o = sample_subset(d.S, p.L_o, rng);
    d.ens = make_ensemble(p.M, build_dictionary(p.N, p.N), p.T, true, rng);
    d.G = complex_normal_matrix(rng, p.L, p.T);
    return d;
}

} // namespace

double rho_ds(std::span<const Index> S, std::span<const Index> S_o, const std::vector<ComplexMatrix> &Phis,
              const ComplexMatrix &G)
{
    return rho_generic(Statistic::ds, S, S_o, Phis, G);
}

double rho_dc(std::span<const Index> S, std::span<const Index> S_o, const std::vector<ComplexMatrix> &Phis,
              const ComplexMatrix &G)
{
    return rho_generic(Statistic::dc, S, S_o, Phis, G);
}

double rho_s_limit(std::span<const Index> S, std::span<const Index> S_o, const ComplexMatrix &Phi)
{
    const Index D = Phi.cols();
    check_supports(S, S_o, D);
    const ComplexMatrix psi = Phi - so_projector(Phi, S_o) * Phi;
    const auto in_so = membership(S_o, D);
    std::vector<Index> rest;
    for (Index j : S)
        if (!in_so[static_cast<std::size_t>(j)])
            rest.push_back(j);
    const RealVector stat = (psi.adjoint() * select_columns(psi, rest)).rowwise().squaredNorm();
    return ratio_of_maxima(stat, S, S_o);
}

double rho_ds_upper_bound(Index N, Index M, Index L, Index L_o)
{
    if (N == M)
        throw ArgumentError("rho_ds_upper_bound: degenerate for N == M (division by N - M)");
    if (!(N > M && M >= L && L > L_o && L_o >= 0))
        throw ArgumentError("rho_ds_upper_bound: requires N > M >= L > L_o >= 0");
    const double n = static_cast<double>(N), m = static_cast<double>(M), l = static_cast<double>(L),
                 lo = static_cast<double>(L_o);
    return 1.0 / (1.0 + (m - n + (m - lo) * (n - lo - 1.0)) / ((n - m) * (l - lo)));
}

OmegaIdentities omega_identities(const ComplexMatrix &Phi, std::span<const Index> S_o)
{
    const Index D = Phi.cols();
    const auto in_so = membership(S_o, D);
    std::vector<Index> rest;
    for (Index j = 0; j < D; ++j)
        if (!in_so[static_cast<std::size_t>(j)])
            rest.push_back(j);
    const ComplexMatrix psi = select_columns(Phi - so_projector(Phi, S_o) * Phi, rest);
    const ComplexMatrix omega = psi.adjoint() * psi;
    return {omega.trace().real(), omega.squaredNorm()};
}

double hermitian_gain_trace(const ComplexMatrix &Phi, std::span<const Index> S, std::span<const Index> S_o)
{
    check_supports(S, S_o, Phi.cols());
    const auto in_so = membership(S_o, Phi.cols());
    std::vector<Index> rest;
    for (Index j : S)
        if (!in_so[static_cast<std::size_t>(j)])
            rest.push_back(j);
    const ComplexMatrix B = select_columns(Phi, rest);
    const ComplexMatrix P = so_projector(Phi, S_o);
    const ComplexMatrix I = ComplexMatrix::Identity(Phi.rows(), Phi.rows());
    const ComplexMatrix bb = B * B.adjoint();
    const ComplexMatrix q_ds = (I - P) * bb * (I - P);
    const ComplexMatrix q_dc = bb - P * bb * P;
    return (B.adjoint() * (q_dc - q_ds) * B).trace().real();
}

void CoherenceParams::validate() const
{
    if (!(N >= M && M >= L && L > L_o && L_o >= 0 && T >= 1))
        throw ConfigError("coherence experiment: requires N >= M >= L > L_o >= 0 and T >= 1 (got N=" +
                          std::to_string(N) + ", M=" + std::to_string(M) + ", L=" + std::to_string(L) +
                          ", L_o=" + std::to_string(L_o) + ", T=" + std::to_string(T) + ")");
}

CoherenceDraw coherence_trial(const CoherenceParams &p, Rng &rng)
{
    p.validate();
    const AnalysisDraw d = draw_instance(p, rng);
    std::vector<ComplexMatrix> phis;
    phis.reserve(static_cast<std::size_t>(p.T));
    for (Index t = 0; t < p.T; ++t)
        phis.push_back(d.ens.phi(t));
    const std::vector<ComplexMatrix> fixed{phis.front()};

    CoherenceDraw out;
    out.rho_s = rho_ds(d.S, d.S_o, fixed, d.G);
    out.rho_s_limit = rho_s_limit(d.S, d.S_o, fixed.front());
    out.rho_ds = rho_ds(d.S, d.S_o, phis, d.G);
    out.rho_dc = rho_dc(d.S, d.S_o, phis, d.G);
    out.hermitian_gain = hermitian_gain_trace(fixed.front(), d.S, d.S_o);
    return out;
}

std::vector<CoherenceDraw> mc_coherence(const CoherenceParams &p, Index trials, std::uint64_t seed, unsigned threads)
{
    p.validate();
    std::vector<CoherenceDraw> out(static_cast<std::size_t>(trials));
    for_each_trial(trials, threads,
                   [&](std::int64_t i)
                   {
                       Rng rng = trial_rng(seed, static_cast<std::uint64_t>(i));
                       out[static_cast<std::size_t>(i)] = coherence_trial(p, rng);
                   });
    return out;
}

double EmpiricalCdf::probability(std::size_t i) const
{
    return static_cast<double>(i + 1) / static_cast<double>(values.size());
}

double EmpiricalCdf::fraction_below(double x) const
{
    if (values.empty())
        return 0.0;
    const auto n = std::lower_bound(values.begin(), values.end(), x) - values.begin();
    return static_cast<double>(n) / static_cast<double>(values.size());
}

double EmpiricalCdf::quantile(double p) const
{
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    // smallest sample whose cumulative probability reaches p
    const double pos = std::ceil(p * static_cast<double>(values.size())) - 1.0;
    const auto i = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(values.size() - 1)));
    return values[i];
}

double EmpiricalCdf::mean() const
{
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double EmpiricalCdf::stddev() const
{
    if (values.size() < 2)
        return 0.0;
    const double mu = mean();
    double acc = 0.0;
    for (double v : values)
        acc += (v - mu) * (v - mu);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

EmpiricalCdf make_cdf(std::vector<double> samples)
{
    std::sort(samples.begin(), samples.end());
    return EmpiricalCdf{std::move(samples)};
}

EmpiricalCdf mc_cdf(CoherenceKind kind, const CoherenceParams &p, Index trials, std::uint64_t seed, unsigned threads)
{
    if (trials < 1)
        throw ConfigError("mc_cdf: trials must be >= 1");
    std::vector<double> samples(static_cast<std::size_t>(trials));
    if (kind == CoherenceKind::ds_bound)
    {
        std::fill(samples.begin(), samples.end(), rho_ds_upper_bound(p.N, p.M, p.L, p.L_o));
        return make_cdf(std::move(samples));
    }
    const auto draws = mc_coherence(p, trials, seed, threads);
    for (std::size_t i = 0; i < draws.size(); ++i)
    {
        const auto &d = draws[i];
        switch (kind)
        {
        case CoherenceKind::s: samples[i] = d.rho_s; break;
        case CoherenceKind::s_limit: samples[i] = d.rho_s_limit; break;
        case CoherenceKind::ds: samples[i] = d.rho_ds; break;
        case CoherenceKind::dc: samples[i] = d.rho_dc; break;
        case CoherenceKind::ds_bound: break;
        }
    }
    return make_cdf(std::move(samples));
}

double IterationSuccess::rate(std::size_t n) const
{
    return attempts[n] > 0 ? static_cast<double>(successes[n]) / static_cast<double>(attempts[n]) : 0.0;
}

double IterationSuccess::full_recovery(Index trials) const
{
    return trials > 0 && !successes.empty() ? static_cast<double>(successes.back()) / static_cast<double>(trials) : 0.0;
}

IterationSuccess success_prob_per_iteration(GreedyAlgorithm alg, const CoherenceParams &p, Index trials,
                                            std::uint64_t seed, unsigned threads)
{
    CoherenceParams q = p;
    q.L_o = 0;
    q.validate();
    if (trials < 1)
        throw ConfigError("success_prob_per_iteration: trials must be >= 1");

    std::vector<std::vector<Index>> picks(static_cast<std::size_t>(trials));
    std::vector<std::vector<Index>> supports(static_cast<std::size_t>(trials));
    for_each_trial(trials, threads,
                   [&](std::int64_t i)
                   {
                       Rng rng = trial_rng(seed, static_cast<std::uint64_t>(i));
                       const AnalysisDraw d = draw_instance(q, rng);
                       std::vector<MeasurementBlock> blocks;
                       blocks.reserve(static_cast<std::size_t>(q.T));
                       for (Index t = 0; t < q.T; ++t)
                           blocks.push_back({d.ens.op(t), select_columns(d.ens.phi(t), d.S) * d.G.col(t)});
                       const auto rule = alg == GreedyAlgorithm::dsomp ? SelectionRule::residual : SelectionRule::covariance;
                       picks[static_cast<std::size_t>(i)] = greedy_select(blocks, q.L, rule).support;
                       supports[static_cast<std::size_t>(i)] = d.S;
                   });

    IterationSuccess out;
    out.attempts.assign(static_cast<std::size_t>(q.L), 0);
    out.successes.assign(static_cast<std::size_t>(q.L), 0);
    for (std::size_t i = 0; i < picks.size(); ++i)
    {
        const auto &S = supports[i];
        for (std::size_t n = 0; n < picks[i].size(); ++n)
        {
            ++out.attempts[n];
            if (!std::binary_search(S.begin(), S.end(), picks[i][n]))
                break;
            ++out.successes[n];
        }
    }
    return out;
}

} // namespace hycov
