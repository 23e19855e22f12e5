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

#include "hycov/simulate.hpp"
#include "hycov/errors.hpp"

#include <cmath>
#include <string>

namespace hycov
{

double noise_variance(double snr_db)
{
    return std::pow(10.0, -snr_db / 10.0);
}

namespace
{

void add_noise(ComplexMatrix &y, double sigma2, Rng &rng)
{
    if (sigma2 > 0.0)
        y += complex_normal_matrix(rng, y.rows(), y.cols(), sigma2);
}

void check_ensemble(const SparseChannelRealization &ch, const SensingEnsemble &ens, Index N)
{
    if (ens.T < ch.snapshots())
        throw DimensionError("simulate: ensemble covers " + std::to_string(ens.T) + " snapshots, channel has " +
                             std::to_string(ch.snapshots()));
    if (ens.combiner(0).cols() != N)
        throw DimensionError("simulate: combiner width does not match the array size");
}

} // namespace

MeasurementSet simulate_narrowband(const SparseChannelRealization &ch, const SensingEnsemble &ens, double snr_db, Rng &rng)
{
    const Index N = ens.combiner(0).cols();
    check_ensemble(ch, ens, N);
    const ComplexMatrix steer = path_steering(ch.aoas, N);

    MeasurementSet out;
    out.sigma2 = noise_variance(snr_db);
    out.frames.reserve(static_cast<std::size_t>(ch.snapshots()));
    for (Index t = 0; t < ch.snapshots(); ++t)
    {
        ComplexMatrix y = ens.combiner(t) * (steer * ch.gains.col(t));
        add_noise(y, out.sigma2, rng);
        out.frames.push_back(std::move(y));
    }
    return out;
}

MeasurementSet simulate_mimo(const SparseChannelRealization &ch, const std::vector<MimoFrameSchedule> &schedules,
                             Index N_R, Index N_T, double snr_db, Rng &rng)
{
    if (static_cast<Index>(schedules.size()) < ch.snapshots())
        throw ConfigError("simulate_mimo: one schedule per frame is required");

    MeasurementSet out;
    out.sigma2 = noise_variance(snr_db);
    out.frames.reserve(static_cast<std::size_t>(ch.snapshots()));
    for (Index t = 0; t < ch.snapshots(); ++t)
    {
        const MimoFrameSchedule &s = schedules[static_cast<std::size_t>(t)];
        s.validate();
        const ComplexMatrix H = mimo_channel_matrix(ch, N_R, N_T, t);
        const Index m_r = s.combiners.front().rows();
        ComplexMatrix y;
        if (s.mode == MimoMode::fixed_both)
        {
            y = s.combiner(0) * (H * s.precoder(0));
            add_noise(y, out.sigma2 / static_cast<double>(s.M_T), rng);
        }
        else
        {
            y.resize(m_r * s.M_T, 1);
            for (Index k = 0; k < s.M_T; ++k)
                y.middleRows(k * m_r, m_r) = s.combiner(k) * (H * s.precoder(k));
            add_noise(y, out.sigma2, rng);
        }
        out.frames.push_back(std::move(y));
    }
    return out;
}

MeasurementSet simulate_wideband(const SparseChannelRealization &ch, const SensingEnsemble &ens, double snr_db, Rng &rng)
{
    const Index N = ens.combiner(0).cols();
    check_ensemble(ch, ens, N);
    if (ch.taps.rows() != ch.paths())
        throw DimensionError("simulate_wideband: channel has no subcarrier taps");
    const ComplexMatrix steer = path_steering(ch.aoas, N);

    MeasurementSet out;
    out.sigma2 = noise_variance(snr_db);
    out.frames.reserve(static_cast<std::size_t>(ch.snapshots()));
    for (Index t = 0; t < ch.snapshots(); ++t)
    {
        const ComplexMatrix gk = ch.gains.col(t).asDiagonal() * ch.taps; // L x K
        ComplexMatrix y = ens.combiner(t) * (steer * gk);
        add_noise(y, out.sigma2, rng);
        out.frames.push_back(std::move(y));
    }
    return out;
}

} // namespace hycov
