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

#include "hycov/metrics.hpp"
#include "hycov/errors.hpp"
#include "hycov/tolerances.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hycov
{

namespace
{

void check_pair(const HermitianMatrix &a, const HermitianMatrix &b, Index L)
{
    if (a.dim() != b.dim())
        throw DimensionError("covariance metric: dimensions differ (" + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()) + ")");
    if (L < 1 || L > a.dim())
        throw ArgumentError("covariance metric: L = " + std::to_string(L) + " outside [1, " + std::to_string(a.dim()) + "]");
}

double usable_streams(const ComplexMatrix &U, const HermitianMatrix &R)
{
    const RealVector lambda = eig_hermitian(HermitianMatrix(U.adjoint() * R.matrix() * U)).values;
    const double top = eig_hermitian(R).values.maxCoeff();
    return top > 0.0 ? static_cast<double>((lambda.array() > tol::stream_rank * top).count()) : 0.0;
}

} // namespace

ComplexMatrix dominant_eigenvectors(const HermitianMatrix &R, Index L)
{
    return eig_hermitian(R).vectors.leftCols(L);
}

double ideal_energy(const HermitianMatrix &R, Index L)
{
    return eig_hermitian(R).values.head(L).sum();
}

double efficiency_eta(const ComplexMatrix &U_hat, const HermitianMatrix &R_true, double ideal)
{
    if (!(ideal > 0.0))
        return 0.0;
    const double captured = (U_hat.adjoint() * R_true.matrix() * U_hat).trace().real();
    return captured / ideal;
}

double efficiency_eta(const HermitianMatrix &R_hat, const HermitianMatrix &R_true, Index L)
{
    check_pair(R_hat, R_true, L);
    return efficiency_eta(dominant_eigenvectors(R_hat, L), R_true, ideal_energy(R_true, L));
}

double spectral_efficiency(const ComplexMatrix &U, const HermitianMatrix &R, double snr_db)
{
    const double snr = std::pow(10.0, snr_db / 10.0);
    const RealVector lambda = eig_hermitian(HermitianMatrix(U.adjoint() * R.matrix() * U)).values;
    const double per_stream = snr / static_cast<double>(U.cols());
    double se = 0.0;
    for (Index s = 0; s < lambda.size(); ++s)
        se += std::log2(1.0 + per_stream * std::max(lambda(s), 0.0));
    return se;
}

RateLoss rate_loss(const HermitianMatrix &R_hat, const HermitianMatrix &R_true, Index streams, double snr_db)
{
    check_pair(R_hat, R_true, streams);
    return rate_loss(dominant_eigenvectors(R_hat, streams), dominant_eigenvectors(R_true, streams), R_true, snr_db);
}

RateLoss rate_loss(const ComplexMatrix &U_est, const ComplexMatrix &U_ideal, const HermitianMatrix &R_true, double snr_db)
{
    if (U_est.rows() != R_true.dim() || U_ideal.rows() != R_true.dim())
        throw DimensionError("rate_loss: beamformer rows differ from the covariance dimension");
    RateLoss out;
    if (std::isinf(snr_db) && snr_db > 0.0)
    {
        // SE grows as r log2(snr), so the relative loss tends to the ratio of stream counts
        const double r_est = usable_streams(U_est, R_true), r_ideal = usable_streams(U_ideal, R_true);
        out.se_est = r_est > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        out.se_ideal = r_ideal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        out.loss_pct = r_ideal > 0.0 ? 100.0 * (r_est - r_ideal) / r_ideal : 0.0;
        return out;
    }
    out.se_est = spectral_efficiency(U_est, R_true, snr_db);
    out.se_ideal = spectral_efficiency(U_ideal, R_true, snr_db);
    out.loss_pct = out.se_ideal > 0.0 ? 100.0 * (out.se_est - out.se_ideal) / out.se_ideal : 0.0;
    return out;
}

SideCovariances mimo_side_covariances(const CovarianceEstimate &est, const ComplexMatrix &A_R, const ComplexMatrix &A_T)
{
    const Index D_R = A_R.cols();
    std::vector<Index> rx, tx;
    for (Index j : est.support)
    {
        if (j < 0 || j >= D_R * A_T.cols())
            throw DimensionError("mimo_side_covariances: support index " + std::to_string(j) + " out of range");
        rx.push_back(j % D_R);
        tx.push_back(j / D_R);
    }
    if (rx.empty())
        return {HermitianMatrix::zero(A_R.rows()), HermitianMatrix::zero(A_T.rows())};
    const ComplexMatrix ar = select_columns(A_R, rx), at = select_columns(A_T, tx);
    const ComplexMatrix B = est.rg_block;
    const ComplexMatrix gram_t = at.adjoint() * at, gram_r = ar.adjoint() * ar;
    return {HermitianMatrix(ar * B.cwiseProduct(gram_t) * ar.adjoint()),
            HermitianMatrix(at * B.conjugate().cwiseProduct(gram_r) * at.adjoint())};
}

SideCovariances mimo_true_side_covariances(const SparseChannelRealization &ch, Index N_R, Index N_T)
{
    const ComplexMatrix ar = path_steering(ch.aoas, N_R), at = path_steering(ch.aods, N_T);
    return {HermitianMatrix(static_cast<double>(N_T) * ar * ar.adjoint()),
            HermitianMatrix(static_cast<double>(N_R) * at * at.adjoint())};
}

} // namespace hycov
