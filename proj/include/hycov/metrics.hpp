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

#ifndef HYCOV_METRICS_HPP
#define HYCOV_METRICS_HPP

#include "hycov/channel.hpp"
#include "hycov/numerics.hpp"
#include "hycov/recovery.hpp"

namespace hycov
{

// Top-L eigenvectors of R (N x L), ordered by decreasing eigenvalue.
ComplexMatrix dominant_eigenvectors(const HermitianMatrix &R, Index L);

// Tr(U_hat^* R U_hat) / Tr(U^* R U) with U_hat, U the top-L eigenvectors of R_hat and R.
double efficiency_eta(const HermitianMatrix &R_hat, const HermitianMatrix &R_true, Index L);

// Same, with the estimated subspace supplied directly and the ideal denominator precomputed.
double efficiency_eta(const ComplexMatrix &U_hat, const HermitianMatrix &R_true, double ideal_energy);

// Sum of the L largest eigenvalues of R.
double ideal_energy(const HermitianMatrix &R, Index L);

struct RateLoss
{
    double se_est = 0.0;
    double se_ideal = 0.0;
    double loss_pct = 0.0;
};

// SE(U) = sum_s log2(1 + (snr / L_s) lambda_s(U^* R_true U)) with U the top-L_s eigenvectors
// of R_hat (estimated) or R_true (ideal). loss_pct = 100 (SE_est - SE_ideal) / SE_ideal, or 0
// when SE_ideal = 0. At infinite SNR both SE values are +inf and loss_pct is the high-SNR limit
// 100 (r_est - r_ideal) / r_ideal, r being the number of streams with nonzero gain.
RateLoss rate_loss(const HermitianMatrix &R_hat, const HermitianMatrix &R_true, Index streams, double snr_db);

// Same, for precomputed estimated and ideal beamformers.
RateLoss rate_loss(const ComplexMatrix &U_est, const ComplexMatrix &U_ideal, const HermitianMatrix &R_true, double snr_db);

// Spectral efficiency of beamformer U on covariance R.
double spectral_efficiency(const ComplexMatrix &U, const HermitianMatrix &R, double snr_db);

// Receive-side E[H H^*] and transmit-side E[H^* H] implied by a MIMO estimate whose support
// indexes vec(G) as tx * D_R + rx.
struct SideCovariances
{
    HermitianMatrix rx;
    HermitianMatrix tx;
};

SideCovariances mimo_side_covariances(const CovarianceEstimate &est, const ComplexMatrix &A_R, const ComplexMatrix &A_T);

// N_T sum_l a_R a_R^* and N_R sum_l a_T a_T^* for unit-variance paths.
SideCovariances mimo_true_side_covariances(const SparseChannelRealization &ch, Index N_R, Index N_T);

} // namespace hycov

#endif
