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

#include "hycov/channel.hpp"
#include "hycov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hycov
{

namespace
{

void require(bool cond, const std::string &msg)
{
    if (!cond)
        throw ConfigError("scenario: " + msg);
}

// k distinct values from [0, n), ascending.
std::vector<Index> sample_without_replacement(Index n, Index k, Rng &rng)
{
    std::vector<Index> pool(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        pool[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < k; ++i)
    {
        std::uniform_int_distribution<Index> pick(i, n - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
}

double uniform_omega(Rng &rng)
{
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    return u(rng);
}

double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

} // namespace

void ScenarioConfig::validate(ScenarioKind kind) const
{
    require(T >= 1, "T must be >= 1");
    require(L >= 1, "L must be >= 1");
    if (kind == ScenarioKind::mimo)
    {
        require(N_R >= M_R && M_R >= 1, "requires N_R >= M_R >= 1");
        require(N_T >= M_T && M_T >= 1, "requires N_T >= M_T >= 1");
        require(D_R >= N_R, "requires D_R >= N_R");
        require(D_T >= N_T, "requires D_T >= N_T");
        require(L <= M_R * M_T, "requires L <= M_R * M_T");
        require(!on_grid || L <= D_R * D_T, "requires L <= D_R * D_T");
        return;
    }
    require(N >= M, "requires N >= M");
    require(M >= L, "requires M >= L");
    require(D >= N, "requires D >= N");
    if (kind == ScenarioKind::wideband)
    {
        require(K >= 1, "K must be >= 1");
        require(N_cp >= 1, "N_cp must be >= 1");
    }
}

ComplexVector ula_response(double omega, Index N)
{
    ComplexVector a(N);
    for (Index n = 0; n < N; ++n)
        a(n) = std::polar(1.0, omega * static_cast<double>(n));
    return a;
}

Dictionary build_dictionary(Index N, Index D)
{
    if (N < 1)
        throw ConfigError("build_dictionary: N must be >= 1");
    if (D < N)
        throw ConfigError("build_dictionary: D = " + std::to_string(D) + " is smaller than N = " + std::to_string(N));
    Dictionary dict{ComplexMatrix(N, D), std::vector<double>(static_cast<std::size_t>(D))};
    for (Index d = 0; d < D; ++d)
    {
        const double omega = 2.0 * std::numbers::pi * static_cast<double>(d) / static_cast<double>(D) - std::numbers::pi;
        dict.grid[static_cast<std::size_t>(d)] = omega;
        dict.A.col(d) = ula_response(omega, N);
    }
    return dict;
}

SparseChannelRealization draw_channel(const ScenarioConfig &cfg, Rng &rng)
{
    SparseChannelRealization ch;
    ch.on_grid = cfg.on_grid;
    ch.aoas.resize(static_cast<std::size_t>(cfg.L));
    if (cfg.on_grid)
    {
        if (cfg.L > cfg.D)
            throw ConfigError("draw_channel: L exceeds the dictionary size");
        ch.support = sample_without_replacement(cfg.D, cfg.L, rng);
        for (Index l = 0; l < cfg.L; ++l)
            ch.aoas[static_cast<std::size_t>(l)] =
                2.0 * std::numbers::pi * static_cast<double>(ch.support[static_cast<std::size_t>(l)]) /
                    static_cast<double>(cfg.D) -
                std::numbers::pi;
    }
    else
    {
        for (auto &w : ch.aoas)
            w = uniform_omega(rng);
    }
    ch.gains = complex_normal_matrix(rng, cfg.L, cfg.T);
    return ch;
}

ComplexMatrix subcarrier_taps(const std::vector<double> &delays, Index N_cp, Index K)
{
    if (N_cp < 1 || K < 1)
        throw ConfigError("subcarrier_taps: N_cp and K must be >= 1");
    const Index L = static_cast<Index>(delays.size());
    ComplexMatrix c = ComplexMatrix::Zero(L, K);
    for (Index l = 0; l < L; ++l)
    {
        const double tau = delays[static_cast<std::size_t>(l)];
        if (!(tau >= 0.0 && tau < static_cast<double>(N_cp)))
            throw ConfigError("subcarrier_taps: delay " + std::to_string(tau) + " outside [0, N_cp)");
        for (Index d = 0; d < N_cp; ++d)
        {
            const double p = sinc(static_cast<double>(d) - tau);
            if (p == 0.0)
                continue;
            for (Index k = 0; k < K; ++k)
                c(l, k) += p * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * d) / static_cast<double>(K));
        }
    }
    return c;
}

SparseChannelRealization draw_wideband_channel(const ScenarioConfig &cfg, Rng &rng)
{
    SparseChannelRealization ch = draw_channel(cfg, rng);
    std::uniform_real_distribution<double> u(0.0, static_cast<double>(cfg.N_cp));
    ch.delays.resize(static_cast<std::size_t>(cfg.L));
    for (auto &tau : ch.delays)
        tau = u(rng);
    ch.taps = subcarrier_taps(ch.delays, cfg.N_cp, cfg.K);
    return ch;
}

SparseChannelRealization draw_mimo_channel(const ScenarioConfig &cfg, Rng &rng)
{
    SparseChannelRealization ch;
    ch.on_grid = cfg.on_grid;
    const auto L = static_cast<std::size_t>(cfg.L);
    ch.aoas.resize(L);
    ch.aods.resize(L);
    if (cfg.on_grid)
    {
        ch.support = sample_without_replacement(cfg.D_R * cfg.D_T, cfg.L, rng);
        ch.rx_support.resize(L);
        ch.tx_support.resize(L);
        for (std::size_t l = 0; l < L; ++l)
        {
            const Index rx = ch.support[l] % cfg.D_R;
            const Index tx = ch.support[l] / cfg.D_R;
            ch.rx_support[l] = rx;
            ch.tx_support[l] = tx;
            ch.aoas[l] = 2.0 * std::numbers::pi * static_cast<double>(rx) / static_cast<double>(cfg.D_R) - std::numbers::pi;
            ch.aods[l] = 2.0 * std::numbers::pi * static_cast<double>(tx) / static_cast<double>(cfg.D_T) - std::numbers::pi;
        }
    }
    else
    {
        for (std::size_t l = 0; l < L; ++l)
        {
            ch.aoas[l] = uniform_omega(rng);
            ch.aods[l] = uniform_omega(rng);
        }
    }
    ch.gains = complex_normal_matrix(rng, cfg.L, cfg.T);
    return ch;
}

ComplexMatrix path_steering(const std::vector<double> &omegas, Index N)
{
    ComplexMatrix a(N, static_cast<Index>(omegas.size()));
    for (std::size_t l = 0; l < omegas.size(); ++l)
        a.col(static_cast<Index>(l)) = ula_response(omegas[l], N);
    return a;
}

ComplexVector channel_snapshot(const SparseChannelRealization &ch, Index N, Index t)
{
    return path_steering(ch.aoas, N) * ch.gains.col(t);
}

ComplexMatrix mimo_channel_matrix(const SparseChannelRealization &ch, Index N_R, Index N_T, Index t)
{
    const ComplexMatrix ar = path_steering(ch.aoas, N_R);
    const ComplexMatrix at = path_steering(ch.aods, N_T);
    return ar * ch.gains.col(t).asDiagonal() * at.adjoint();
}

HermitianMatrix population_covariance(const SparseChannelRealization &ch, Index N)
{
    const ComplexMatrix a = path_steering(ch.aoas, N);
    return HermitianMatrix(a * a.adjoint());
}

HermitianMatrix wideband_population_covariance(const SparseChannelRealization &ch, Index N)
{
    if (ch.taps.rows() != ch.paths() || ch.taps.cols() < 1)
        throw DimensionError("wideband_population_covariance: channel has no subcarrier taps");
    const ComplexMatrix a = path_steering(ch.aoas, N);
    const RealVector power = ch.taps.rowwise().squaredNorm() / static_cast<double>(ch.taps.cols());
    return HermitianMatrix(a * power.cast<cdouble>().asDiagonal() * a.adjoint());
}

} // namespace hycov
