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

#include "hycov/recovery.hpp"
#include "hycov/errors.hpp"
#include "hycov/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hycov
{

namespace
{

// F with F F^* = X X^* and at most rows() columns.
ComplexMatrix covariance_factor(const ComplexMatrix &x)
{
    if (x.cols() <= x.rows())
        return x;
    const Eigen::HouseholderQR<ComplexMatrix> qr(x.adjoint());
    const ComplexMatrix r = qr.matrixQR().topRows(x.rows()).triangularView<Eigen::Upper>();
    return r.adjoint();
}

struct BlockState
{
    const SensingOperator *op = nullptr;
    ComplexMatrix F;
    ComplexMatrix Q; // orthonormal basis of the selected columns
};

// Appends the component of phi orthogonal to span(Q), two passes of classical Gram-Schmidt.
void extend_basis(ComplexMatrix &Q, const ComplexVector &phi, Index support_size)
{
    ComplexVector u = phi;
    for (int pass = 0; pass < 2 && Q.cols() > 0; ++pass)
        u -= Q * (Q.adjoint() * u);
    const double nrm = u.norm();
    if (!(nrm > tol::gram_schmidt_floor * phi.norm()))
        throw SingularityError("greedy selection: selected columns are linearly dependent (support size " +
                                   std::to_string(support_size) + ")",
                               static_cast<long>(support_size));
    Q.conservativeResize(Q.rows(), Q.cols() + 1);
    Q.col(Q.cols() - 1) = u / nrm;
}

ComplexMatrix projected(const BlockState &b)
{
    if (b.Q.cols() == 0)
        return ComplexMatrix::Zero(b.F.rows(), b.F.cols());
    return b.Q * (b.Q.adjoint() * b.F);
}

double residual_norm(const std::vector<BlockState> &state, SelectionRule rule)
{
    double acc = 0.0;
    for (const auto &b : state)
    {
        const ComplexMatrix pf = projected(b);
        if (rule == SelectionRule::residual)
            acc += (b.F - pf).squaredNorm();
        else
            acc += (b.F * b.F.adjoint() - pf * pf.adjoint()).squaredNorm();
    }
    return std::sqrt(acc);
}

void check_blocks(const std::vector<MeasurementBlock> &blocks, Index L)
{
    if (blocks.empty())
        throw DimensionError("greedy selection: no measurements");
    const Index D = blocks.front().op->cols();
    for (const auto &b : blocks)
    {
        if (!b.op)
            throw DimensionError("greedy selection: missing sensing operator");
        if (b.op->cols() != D)
            throw DimensionError("greedy selection: sensing operators differ in dictionary size");
        if (b.data.rows() != b.op->rows())
            throw DimensionError("greedy selection: measurement has " + std::to_string(b.data.rows()) +
                                 " rows, sensing operator has " + std::to_string(b.op->rows()));
        if (L > b.op->rows())
            throw ConfigError("greedy selection: L = " + std::to_string(L) + " exceeds the " +
                              std::to_string(b.op->rows()) + " measurement rows");
    }
    if (L < 1 || L > D)
        throw ConfigError("greedy selection: L = " + std::to_string(L) + " outside [1, " + std::to_string(D) + "]");
}

std::vector<OperatorPtr> dense_ops(const ComplexMatrix &Phi)
{
    return {std::make_shared<DenseSensing>(Phi)};
}

void check_pair(const std::vector<OperatorPtr> &Phis, const std::vector<ComplexMatrix> &ys)
{
    if (Phis.size() != ys.size() || ys.empty())
        throw DimensionError("recovery: need one sensing operator per snapshot (" + std::to_string(Phis.size()) +
                             " operators, " + std::to_string(ys.size()) + " snapshots)");
}

// (1/B) sum_b pinv(Phi_{b,S}) X_b X_b^* pinv(Phi_{b,S})^*
ComplexMatrix backprojected_block(const std::vector<MeasurementBlock> &blocks, std::span<const Index> support)
{
    const auto k = static_cast<Index>(support.size());
    ComplexMatrix acc = ComplexMatrix::Zero(k, k);
    for (const auto &b : blocks)
    {
        const ComplexMatrix z = pseudoinverse(b.op->columns(support)) * covariance_factor(b.data);
        acc.noalias() += z * z.adjoint();
    }
    acc /= static_cast<double>(blocks.size());
    return HermitianMatrix(acc).matrix();
}

SparseEstimate sparse_gains(const std::vector<MeasurementBlock> &blocks, GreedyTrace trace)
{
    SparseEstimate est;
    Index cols = 0;
    for (const auto &b : blocks)
        cols += b.data.cols();
    est.gains.resize(static_cast<Index>(trace.support.size()), cols);
    Index c = 0;
    for (const auto &b : blocks)
    {
        est.gains.middleCols(c, b.data.cols()) = pseudoinverse(b.op->columns(trace.support)) * b.data;
        c += b.data.cols();
    }
    est.support = std::move(trace.support);
    est.residual_norms = std::move(trace.residual_norms);
    return est;
}

CovarianceEstimate covariance_estimate(const std::vector<MeasurementBlock> &blocks, Index L)
{
    GreedyTrace trace = greedy_select(blocks, L, SelectionRule::covariance);
    CovarianceEstimate est;
    est.rg_block = backprojected_block(blocks, trace.support);
    est.support = std::move(trace.support);
    est.residual_norms = std::move(trace.residual_norms);
    return est;
}

} // namespace

GreedyTrace greedy_select(const std::vector<MeasurementBlock> &blocks, Index L, SelectionRule rule,
                          std::span<const Index> initial_support)
{
    check_blocks(blocks, L);
    const Index D = blocks.front().op->cols();
    if (static_cast<Index>(initial_support.size()) > L)
        throw ConfigError("greedy selection: initial support larger than L");

    std::vector<BlockState> state;
    state.reserve(blocks.size());
    for (const auto &b : blocks)
        state.push_back({b.op.get(), covariance_factor(b.data), ComplexMatrix(b.op->rows(), 0)});

    GreedyTrace trace;
    std::vector<char> taken(static_cast<std::size_t>(D), 0);
    const auto add = [&](Index j)
    {
        if (j < 0 || j >= D || taken[static_cast<std::size_t>(j)])
            throw ArgumentError("greedy selection: invalid or repeated support index " + std::to_string(j));
        taken[static_cast<std::size_t>(j)] = 1;
        trace.support.push_back(j);
        const Index one[1] = {j};
        for (auto &b : state)
            extend_basis(b.Q, b.op->columns(one).col(0), static_cast<Index>(trace.support.size()));
    };
    for (Index j : initial_support)
        add(j);
    trace.residual_norms.push_back(residual_norm(state, rule));

    RealVector base;
    if (rule == SelectionRule::covariance)
    {
        base = RealVector::Zero(D);
        for (const auto &b : state)
            base += b.op->adjoint_times(b.F).rowwise().squaredNorm();
    }

    while (static_cast<Index>(trace.support.size()) < L)
    {
        RealVector score;
        if (rule == SelectionRule::residual)
        {
            score = RealVector::Zero(D);
            for (const auto &b : state)
                score += b.op->adjoint_times(b.F - projected(b)).rowwise().squaredNorm();
        }
        else
        {
            score = base;
            if (!trace.support.empty())
                for (const auto &b : state)
                    score -= b.op->adjoint_times(projected(b)).rowwise().squaredNorm();
        }

        Index best = -1;
        double best_score = 0.0;
        for (Index i = 0; i < D; ++i)
            if (!taken[static_cast<std::size_t>(i)] && (best < 0 || score(i) > best_score))
            {
                best = i;
                best_score = score(i);
            }
        add(best);
        trace.residual_norms.push_back(residual_norm(state, rule));
    }
    return trace;
}

ComplexMatrix CovarianceEstimate::dense_rg(Index D) const
{
    ComplexMatrix out = ComplexMatrix::Zero(D, D);
    for (std::size_t j = 0; j < support.size(); ++j)
        for (std::size_t i = 0; i < support.size(); ++i)
            out(support[i], support[j]) = rg_block(static_cast<Index>(i), static_cast<Index>(j));
    return out;
}

SparseEstimate omp(const ComplexMatrix &Phi, const ComplexVector &y, Index L)
{
    return somp(Phi, y, L);
}

SparseEstimate omp_snapshots(const ComplexMatrix &Phi, const ComplexMatrix &Y, Index L)
{
    const auto op = std::make_shared<DenseSensing>(Phi);
    std::vector<SparseEstimate> per(static_cast<std::size_t>(Y.cols()));
    SparseEstimate out;
    for (Index t = 0; t < Y.cols(); ++t)
    {
        auto &e = per[static_cast<std::size_t>(t)];
        e = sparse_gains({{op, Y.col(t)}}, greedy_select({{op, Y.col(t)}}, L, SelectionRule::residual));
        for (Index j : e.support)
            if (std::find(out.support.begin(), out.support.end(), j) == out.support.end())
                out.support.push_back(j);
    }
    out.gains = ComplexMatrix::Zero(static_cast<Index>(out.support.size()), Y.cols());
    std::vector<double> res(static_cast<std::size_t>(L) + 1, 0.0);
    for (Index t = 0; t < Y.cols(); ++t)
    {
        const auto &e = per[static_cast<std::size_t>(t)];
        for (std::size_t k = 0; k < e.support.size(); ++k)
        {
            const auto row = std::find(out.support.begin(), out.support.end(), e.support[k]) - out.support.begin();
            out.gains(static_cast<Index>(row), t) = e.gains(static_cast<Index>(k), 0);
        }
        for (std::size_t n = 0; n < res.size(); ++n)
            res[n] += e.residual_norms[n] * e.residual_norms[n];
    }
    for (auto &r : res)
        r = std::sqrt(r);
    out.residual_norms = std::move(res);
    return out;
}

SparseEstimate somp(const ComplexMatrix &Phi, const ComplexMatrix &Y, Index L)
{
    const std::vector<MeasurementBlock> blocks{{dense_ops(Phi).front(), Y}};
    return sparse_gains(blocks, greedy_select(blocks, L, SelectionRule::residual));
}

SparseEstimate dsomp(const std::vector<OperatorPtr> &Phis, const std::vector<ComplexMatrix> &ys, Index L)
{
    check_pair(Phis, ys);
    std::vector<MeasurementBlock> blocks;
    blocks.reserve(ys.size());
    for (std::size_t t = 0; t < ys.size(); ++t)
        blocks.push_back({Phis[t], ys[t]});
    return sparse_gains(blocks, greedy_select(blocks, L, SelectionRule::residual));
}

CovarianceEstimate comp(const ComplexMatrix &Phi, const ComplexMatrix &Y, Index L)
{
    return covariance_estimate({{dense_ops(Phi).front(), Y / std::sqrt(static_cast<double>(Y.cols()))}}, L);
}

CovarianceEstimate dcomp(const std::vector<OperatorPtr> &Phis, const std::vector<ComplexMatrix> &ys, Index L)
{
    check_pair(Phis, ys);
    std::vector<MeasurementBlock> blocks;
    for (std::size_t t = 0; t < ys.size(); ++t)
        for (Index k = 0; k < ys[t].cols(); ++k)
            blocks.push_back({Phis[t], ys[t].col(k)});
    return covariance_estimate(blocks, L);
}

CovarianceEstimate wb_dcomp(const std::vector<OperatorPtr> &Phis, const std::vector<ComplexMatrix> &ys, Index L)
{
    check_pair(Phis, ys);
    std::vector<MeasurementBlock> blocks;
    blocks.reserve(ys.size());
    for (std::size_t t = 0; t < ys.size(); ++t)
        blocks.push_back({Phis[t], ys[t] / std::sqrt(static_cast<double>(ys[t].cols()))});
    return covariance_estimate(blocks, L);
}

CovarianceEstimate reconstruct_covariance(const SparseEstimate &est)
{
    CovarianceEstimate out;
    out.support = est.support;
    const auto T = static_cast<double>(std::max<Index>(est.gains.cols(), 1));
    out.rg_block = HermitianMatrix(est.gains * est.gains.adjoint() / T).matrix();
    out.gains = est.gains;
    out.residual_norms = est.residual_norms;
    return out;
}

HermitianMatrix channel_covariance(const CovarianceEstimate &est, const ComplexMatrix &A)
{
    if (est.support.empty())
        return HermitianMatrix::zero(A.rows());
    const ComplexMatrix a_s = select_columns(A, est.support);
    return HermitianMatrix(a_s * est.rg_block * a_s.adjoint());
}

} // namespace hycov
