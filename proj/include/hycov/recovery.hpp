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

#ifndef HYCOV_RECOVERY_HPP
#define HYCOV_RECOVERY_HPP

#include "hycov/numerics.hpp"
#include "hycov/sensing.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hycov
{

// ---- selection engine ------------------------------------------------------------------
//
// Every estimator is a greedy loop over "blocks" (Phi_b, X_b). With P_b the projector onto
// the selected columns of Phi_b, the score of column i is
//   residual:   sum_b || [Phi_b^* (I - P_b) X_b]_i ||^2            (OMP, SOMP, DSOMP)
//   covariance: sum_b phi_{b,i}^* (R_b - P_b R_b P_b) phi_{b,i}    (COMP, DCOMP, WB-DCOMP)
// with R_b = X_b X_b^*. Both depend on X_b only through R_b, so wide blocks are replaced
// by a square factor before the loop.

enum class SelectionRule
{
    residual,
    covariance
};

struct MeasurementBlock
{
    OperatorPtr op;
    ComplexMatrix data; // rows = op->rows()
};

struct GreedyTrace
{
    std::vector<Index> support;         // selection order, initial support first
    std::vector<double> residual_norms; // before the first selection and after each one
};

// Runs until |support| = L. Already selected indices are skipped and ties go to the lowest
// index. `initial_support` is taken as already selected.
GreedyTrace greedy_select(const std::vector<MeasurementBlock> &blocks, Index L, SelectionRule rule,
                          std::span<const Index> initial_support = {});

// ---- estimates ---------------------------------------------------------------------------

// Sparse gains on the recovered support. gains has one row per support entry and one
// column per measurement column.
struct SparseEstimate
{
    std::vector<Index> support;
    ComplexMatrix gains;
    std::vector<double> residual_norms;
};

// R_g restricted to the recovered support; zero elsewhere.
struct CovarianceEstimate
{
    std::vector<Index> support;
    ComplexMatrix rg_block; // |S| x |S|, Hermitian
    std::optional<ComplexMatrix> gains;
    std::vector<double> residual_norms;

    ComplexMatrix dense_rg(Index D) const;
};

SparseEstimate omp(const ComplexMatrix &Phi, const ComplexVector &y, Index L);

// OMP on each column separately. The support is the union in order of first selection and
// can therefore exceed L; gains are zero where a snapshot did not select an index.
SparseEstimate omp_snapshots(const ComplexMatrix &Phi, const ComplexMatrix &Y, Index L);

SparseEstimate somp(const ComplexMatrix &Phi, const ComplexMatrix &Y, Index L);

// ys[t] may hold several columns; they share Phi_t.
SparseEstimate dsomp(const std::vector<OperatorPtr> &Phis, const std::vector<ComplexMatrix> &ys, Index L);

CovarianceEstimate comp(const ComplexMatrix &Phi, const ComplexMatrix &Y, Index L);

// Every column of ys[t] is a snapshot with its own rank-one covariance.
CovarianceEstimate dcomp(const std::vector<OperatorPtr> &Phis, const std::vector<ComplexMatrix> &ys, Index L);

// ys[t] is M x K; frame covariance (1/K) sum_k y_{t,k} y_{t,k}^*.
CovarianceEstimate wb_dcomp(const std::vector<OperatorPtr> &Phis, const std::vector<ComplexMatrix> &ys, Index L);

// R_g = (1/T) G G^* on the support of a sparse estimate.
CovarianceEstimate reconstruct_covariance(const SparseEstimate &est);

// R_h = A_S R_g A_S^*.
HermitianMatrix channel_covariance(const CovarianceEstimate &est, const ComplexMatrix &A);

} // namespace hycov

#endif
