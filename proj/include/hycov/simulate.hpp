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

#ifndef HYCOV_SIMULATE_HPP
#define HYCOV_SIMULATE_HPP

#include "hycov/channel.hpp"
#include "hycov/sensing.hpp"

#include <vector>

namespace hycov
{

// Noisy baseband observations. frames[t] holds the measurements of snapshot/frame t as
// columns: one column for narrowband and MIMO, K subcarrier columns for wideband.
struct MeasurementSet
{
    std::vector<ComplexMatrix> frames;
    double sigma2 = 0.0;

    Index snapshots() const { return static_cast<Index>(frames.size()); }
};

// 10^(-snr_db / 10), i.e. SNR = 1 / sigma^2 for unit-variance paths.
double noise_variance(double snr_db);

// y_t = W_t h_t + w_t, w_t ~ CN(0, sigma^2 I). Equals Phi_t g_t + w_t for on-grid channels.
MeasurementSet simulate_narrowband(const SparseChannelRealization &ch, const SensingEnsemble &ens, double snr_db, Rng &rng);

// Aggregate measurement per frame for the schedule of that frame. Mode 1 averages the M_T
// received symbols (noise variance sigma^2 / M_T); modes 2-4 stack them.
MeasurementSet simulate_mimo(const SparseChannelRealization &ch, const std::vector<MimoFrameSchedule> &schedules,
                             Index N_R, Index N_T, double snr_db, Rng &rng);

// y_{t,k} = W_t sum_l g_{l,t} c_{l,k} a(phi_l) + w_{t,k}; one combiner per frame shared by all subcarriers.
MeasurementSet simulate_wideband(const SparseChannelRealization &ch, const SensingEnsemble &ens, double snr_db, Rng &rng);

} // namespace hycov

#endif
