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

#ifndef HYCOV_CHANNEL_HPP
#define HYCOV_CHANNEL_HPP

#include "hycov/numerics.hpp"
#include "hycov/rng.hpp"

#include <cstdint>
#include <vector>

namespace hycov
{

enum class ScenarioKind
{
    narrowband,
    mimo,
    wideband
};

// Every experiment dimension. Unused extension fields are ignored by validate() for
// scenario kinds that do not need them.
struct ScenarioConfig
{
    Index N = 64;   // BS antennas
    Index M = 8;    // BS RF chains
    Index D = 256;  // dictionary size
    Index L = 8;    // paths
    Index T = 100;  // snapshots / frames
    double snr_db = 10.0;
    std::uint64_t seed = 1;
    bool on_grid = false;

    // multi-antenna MS
    Index N_T = 64, M_T = 8, D_T = 256;
    Index N_R = 64, M_R = 8, D_R = 256;

    // wideband OFDM
    Index K = 1;
    Index N_cp = 1;

    // Throws ConfigError naming the first violated invariant.
    void validate(ScenarioKind kind) const;
};

struct Dictionary
{
    ComplexMatrix A;          // N x D, column d = ula_response(grid[d], N)
    std::vector<double> grid; // spatial frequencies in radians per element

    Index antennas() const { return A.rows(); }
    Index size() const { return A.cols(); }
};

struct SparseChannelRealization
{
    bool on_grid = true;

    // On-grid dictionary support in ascending order. For MIMO realizations this is the
    // vectorised index tx * D_R + rx of vec(G_t). Empty for off-grid realizations.
    std::vector<Index> support;
    std::vector<Index> rx_support; // MIMO only, aligned with support
    std::vector<Index> tx_support; // MIMO only, aligned with support

    ComplexMatrix gains;        // L x T, g_{l,t}
    std::vector<double> aoas;   // receive spatial frequency per path
    std::vector<double> aods;   // transmit spatial frequency per path (MIMO)

    std::vector<double> delays; // tau_l / T_s (wideband)
    ComplexMatrix taps;         // L x K, c_{l,k} (wideband)

    Index paths() const { return gains.rows(); }
    Index snapshots() const { return gains.cols(); }
};

// exp(j * omega * n), n = 0..N-1.
ComplexVector ula_response(double omega, Index N);

// Uniform spatial-frequency grid omega_d = 2 pi d / D - pi. A A^* = D I_N.
Dictionary build_dictionary(Index N, Index D);

// Narrowband single-antenna-MS channel: support (on grid) or AoAs (off grid), L x T CN(0,1) gains.
SparseChannelRealization draw_channel(const ScenarioConfig &cfg, Rng &rng);

// draw_channel plus delays uniform on (0, N_cp) and the matching subcarrier taps.
SparseChannelRealization draw_wideband_channel(const ScenarioConfig &cfg, Rng &rng);

// c_{l,k} = sum_{d=0}^{N_cp-1} sinc(d - tau_l) exp(-j 2 pi k d / K), k = 0..K-1.
ComplexMatrix subcarrier_taps(const std::vector<double> &delays, Index N_cp, Index K);

// L distinct (rx, tx) dictionary pairs (on grid) or continuous AoA/AoD pairs (off grid).
SparseChannelRealization draw_mimo_channel(const ScenarioConfig &cfg, Rng &rng);

// N x L matrix of array responses a(aoa_l).
ComplexMatrix path_steering(const std::vector<double> &omegas, Index N);

// h_t = sum_l g_{l,t} a(phi_l).
ComplexVector channel_snapshot(const SparseChannelRealization &ch, Index N, Index t);

// H_t = sum_l g_{l,t} a_R(phi_l) a_T(theta_l)^*.
ComplexMatrix mimo_channel_matrix(const SparseChannelRealization &ch, Index N_R, Index N_T, Index t);

// Population covariance E[h h^*] = sum_l a(phi_l) a(phi_l)^* for unit-variance uncorrelated paths.
HermitianMatrix population_covariance(const SparseChannelRealization &ch, Index N);

// Subcarrier-averaged covariance sum_l p_l a(phi_l) a(phi_l)^* with p_l = (1/K) sum_k |c_{l,k}|^2.
HermitianMatrix wideband_population_covariance(const SparseChannelRealization &ch, Index N);

} // namespace hycov

#endif
