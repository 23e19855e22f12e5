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

#include "hycov/sensing.hpp"
#include "hycov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hycov
{

// ---- operators ---------------------------------------------------------------------------

DenseSensing::DenseSensing(ComplexMatrix phi) : phi_(std::move(phi))
{
    require_finite(phi_, "DenseSensing");
}

ComplexMatrix DenseSensing::adjoint_times(const ComplexMatrix &x) const
{
    if (x.rows() != phi_.rows())
        throw DimensionError("DenseSensing::adjoint_times: operand has " + std::to_string(x.rows()) + " rows, expected " +
                             std::to_string(phi_.rows()));
    return phi_.adjoint() * x;
}

ComplexMatrix DenseSensing::columns(std::span<const Index> idx) const
{
    return select_columns(phi_, idx);
}

KroneckerBlockSensing::KroneckerBlockSensing(ComplexMatrix tx_factor, std::vector<ComplexMatrix> rx_factor)
    : tx_factor_(std::move(tx_factor)), rx_factor_(std::move(rx_factor))
{
    if (rx_factor_.empty() || static_cast<Index>(rx_factor_.size()) != tx_factor_.rows())
        throw DimensionError("KroneckerBlockSensing: need one receive factor per transmit-factor row");
    block_rows_ = rx_factor_.front().rows();
    dict_rx_ = rx_factor_.front().cols();
    for (const auto &r : rx_factor_)
        if (r.rows() != block_rows_ || r.cols() != dict_rx_)
            throw DimensionError("KroneckerBlockSensing: receive factors must share one shape");
    rows_ = block_rows_ * static_cast<Index>(rx_factor_.size());
}

ComplexMatrix KroneckerBlockSensing::adjoint_times(const ComplexMatrix &x) const
{
    if (x.rows() != rows_)
        throw DimensionError("KroneckerBlockSensing::adjoint_times: operand has " + std::to_string(x.rows()) +
                             " rows, expected " + std::to_string(rows_));
    const Index blocks = tx_factor_.rows();
    const Index dict_tx = tx_factor_.cols();
    const ComplexMatrix tx_conj = tx_factor_.conjugate();
    ComplexMatrix out(cols(), x.cols());
    ComplexMatrix z(blocks, dict_rx_);
    for (Index c = 0; c < x.cols(); ++c)
    {
        for (Index s = 0; s < blocks; ++s)
            z.row(s) = (rx_factor_[static_cast<std::size_t>(s)].adjoint() *
                        x.col(c).segment(s * block_rows_, block_rows_))
                           .transpose();
        // out(rx + tx * D_R) = sum_s z(s, rx) conj(tx_factor(s, tx))
        Eigen::Map<ComplexMatrix> grid(out.col(c).data(), dict_rx_, dict_tx);
        grid.noalias() = z.transpose() * tx_conj;
    }
    return out;
}

ComplexMatrix KroneckerBlockSensing::columns(std::span<const Index> idx) const
{
    ComplexMatrix out(rows_, static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
    {
        const Index i = idx[k];
        if (i < 0 || i >= cols())
            throw DimensionError("KroneckerBlockSensing::columns: index out of range");
        const Index rx = i % dict_rx_, tx = i / dict_rx_;
        for (Index s = 0; s < tx_factor_.rows(); ++s)
            out.col(static_cast<Index>(k)).segment(s * block_rows_, block_rows_) =
                tx_factor_(s, tx) * rx_factor_[static_cast<std::size_t>(s)].col(rx);
    }
    return out;
}

ComplexMatrix KroneckerBlockSensing::to_dense() const
{
    ComplexMatrix out(rows_, cols());
    for (Index s = 0; s < tx_factor_.rows(); ++s)
        out.middleRows(s * block_rows_, block_rows_) =
            structured_product(ProductKind::kron, tx_factor_.row(s), rx_factor_[static_cast<std::size_t>(s)]);
    return out;
}

const ComplexMatrix &SensingEnsemble::phi(Index t) const
{
    return static_cast<const DenseSensing &>(*Phi[slot(t)]).matrix();
}

// ---- combiners ---------------------------------------------------------------------------

ComplexMatrix random_analog_combiner(Index M, Index N, Rng &rng)
{
    if (M > N)
        throw ConfigError("random_analog_combiner: M = " + std::to_string(M) + " exceeds N = " + std::to_string(N));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    ComplexMatrix w(M, N);
    for (Index j = 0; j < N; ++j)
        for (Index i = 0; i < M; ++i)
            w(i, j) = std::polar(1.0, phase(rng));
    return w;
}

WhitenedCombiner whiten_to_tight_frame(const ComplexMatrix &W_rf, const ComplexMatrix &A)
{
    if (W_rf.cols() != A.rows())
        throw DimensionError("whiten_to_tight_frame: W_rf has " + std::to_string(W_rf.cols()) + " columns but A has " +
                             std::to_string(A.rows()) + " rows");
    WhitenedCombiner out;
    out.W_bb = inv_sqrt_psd(HermitianMatrix(W_rf * W_rf.adjoint()));
    out.W = out.W_bb * W_rf;
    out.Phi = out.W * A;
    return out;
}

SensingEnsemble make_ensemble(Index M, const Dictionary &dict, Index T, bool time_varying, Rng &rng)
{
    SensingEnsemble e;
    e.time_varying = time_varying;
    e.T = T;
    const Index draws = time_varying ? T : 1;
    for (Index t = 0; t < draws; ++t)
    {
        ComplexMatrix w_rf = random_analog_combiner(M, dict.antennas(), rng);
        WhitenedCombiner wc = whiten_to_tight_frame(w_rf, dict.A);
        e.W_rf.push_back(std::move(w_rf));
        e.W_bb.push_back(std::move(wc.W_bb));
        e.W.push_back(std::move(wc.W));
        e.Phi.push_back(std::make_shared<DenseSensing>(std::move(wc.Phi)));
    }
    return e;
}

FrameMetrics frame_metrics(const ComplexMatrix &phi)
{
    if (phi.cols() < 2)
        throw DimensionError("frame_metrics: need at least two columns");
    const RealVector norms = phi.colwise().norm().transpose();
    const ComplexMatrix gram = phi.adjoint() * phi;
    double rho = 0.0;
    for (Index j = 0; j < phi.cols(); ++j)
        for (Index i = 0; i < phi.cols(); ++i)
            if (i != j && norms(i) > 0.0 && norms(j) > 0.0)
                rho = std::max(rho, std::abs(gram(j, i)) / (norms(i) * norms(j)));

    const double n = static_cast<double>(phi.cols()), m = static_cast<double>(phi.rows());
    FrameMetrics out;
    out.mutual_coherence = std::min(rho, 1.0);
    out.welch_bound = n > m ? std::sqrt((n - m) / (m * (n - 1.0))) : 0.0;
    return out;
}

ComplexMatrix structured_product(ProductKind kind, const ComplexMatrix &a, const ComplexMatrix &b, Index partitions)
{
    const auto kron = [](const ComplexMatrix &x, const ComplexMatrix &y)
    {
        ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
        for (Index j = 0; j < x.cols(); ++j)
            for (Index i = 0; i < x.rows(); ++i)
                out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        return out;
    };

    switch (kind)
    {
    case ProductKind::kron:
        return kron(a, b);
    case ProductKind::khatri_rao:
    {
        if (a.cols() != b.cols())
            throw DimensionError("khatri_rao: column counts differ (" + std::to_string(a.cols()) + " vs " +
                                 std::to_string(b.cols()) + ")");
        ComplexMatrix out(a.rows() * b.rows(), a.cols());
        for (Index j = 0; j < a.cols(); ++j)
            out.col(j) = kron(a.col(j), b.col(j));
        return out;
    }
    case ProductKind::gen_khatri_rao:
    {
        if (partitions < 1 || a.cols() % partitions != 0 || b.cols() % partitions != 0)
            throw DimensionError("gen_khatri_rao: column counts " + std::to_string(a.cols()) + " and " +
                                 std::to_string(b.cols()) + " are not divisible into " + std::to_string(partitions) +
                                 " partitions");
        const Index pa = a.cols() / partitions, pb = b.cols() / partitions;
        ComplexMatrix out(a.rows() * b.rows(), partitions * pa * pb);
        for (Index k = 0; k < partitions; ++k)
            out.middleCols(k * pa * pb, pa * pb) = kron(a.middleCols(k * pa, pa), b.middleCols(k * pb, pb));
        return out;
    }
    }
    throw DimensionError("structured_product: unknown kind");
}

// ---- multi-antenna MS schedules --------------------------------------------------------

void MimoFrameSchedule::validate() const
{
    const auto expect = [&](std::size_t np, std::size_t nc)
    {
        if (precoders.size() != np || combiners.size() != nc)
            throw ConfigError("mimo schedule: mode " + std::to_string(static_cast<int>(mode)) + " with M_T = " +
                              std::to_string(M_T) + " needs " + std::to_string(np) + " precoder(s) and " +
                              std::to_string(nc) + " combiner(s), got " + std::to_string(precoders.size()) + " and " +
                              std::to_string(combiners.size()));
    };
    const auto mt = static_cast<std::size_t>(M_T);
    if (M_T < 1)
        throw ConfigError("mimo schedule: M_T must be >= 1");
    switch (mode)
    {
    case MimoMode::fixed_both: expect(1, 1); break;
    case MimoMode::varying_combiner: expect(1, mt); break;
    case MimoMode::varying_precoder: expect(mt, 1); break;
    case MimoMode::varying_both: expect(mt, mt); break;
    default: throw ConfigError("mimo schedule: mode must be 1..4");
    }
    for (const auto &w : combiners)
        if (w.rows() != combiners.front().rows() || w.cols() != combiners.front().cols())
            throw ConfigError("mimo schedule: combiners differ in shape");
    for (const auto &f : precoders)
        if (f.size() != precoders.front().size())
            throw ConfigError("mimo schedule: precoders differ in length");
}

Index MimoFrameSchedule::aggregate_rows() const
{
    const Index m_r = combiners.front().rows();
    return mode == MimoMode::fixed_both ? m_r : m_r * M_T;
}

ComplexVector random_precoder(Index N_T, Rng &rng)
{
    return random_analog_combiner(1, N_T, rng).row(0).transpose() / std::sqrt(static_cast<double>(N_T));
}

MimoFrameSchedule draw_mimo_schedule(MimoMode mode, Index M_T, Index M_R, Index N_R, Index N_T, Rng &rng)
{
    MimoFrameSchedule s;
    s.mode = mode;
    s.M_T = M_T;
    const bool vary_f = mode == MimoMode::varying_precoder || mode == MimoMode::varying_both;
    const bool vary_w = mode == MimoMode::varying_combiner || mode == MimoMode::varying_both;
    for (Index k = 0; k < (vary_f ? M_T : 1); ++k)
        s.precoders.push_back(random_precoder(N_T, rng));
    for (Index k = 0; k < (vary_w ? M_T : 1); ++k)
    {
        const ComplexMatrix w_rf = random_analog_combiner(M_R, N_R, rng);
        s.combiners.push_back(inv_sqrt_psd(HermitianMatrix(w_rf * w_rf.adjoint())) * w_rf);
    }
    s.validate();
    return s;
}

AggregateSensing aggregate_mimo_sensing(const MimoFrameSchedule &sched, const ComplexMatrix &A_T, const ComplexMatrix &A_R)
{
    sched.validate();
    if (sched.precoders.front().size() != A_T.rows() || sched.combiners.front().cols() != A_R.rows())
        throw ConfigError("aggregate_mimo_sensing: precoder/combiner sizes do not match the dictionaries");

    const auto stack_rows = [](const std::vector<ComplexMatrix> &ws)
    {
        ComplexMatrix out(ws.front().rows() * static_cast<Index>(ws.size()), ws.front().cols());
        for (std::size_t s = 0; s < ws.size(); ++s)
            out.middleRows(static_cast<Index>(s) * ws.front().rows(), ws.front().rows()) = ws[s];
        return out;
    };
    const auto stack_cols = [](const std::vector<ComplexVector> &fs)
    {
        ComplexMatrix out(fs.front().size(), static_cast<Index>(fs.size()));
        for (std::size_t s = 0; s < fs.size(); ++s)
            out.col(static_cast<Index>(s)) = fs[s];
        return out;
    };

    AggregateSensing out;
    switch (sched.mode)
    {
    case MimoMode::fixed_both:
        out.Theta = structured_product(ProductKind::kron, sched.precoders[0].transpose(), sched.combiners[0]);
        break;
    case MimoMode::varying_combiner:
        out.Theta = structured_product(ProductKind::kron, sched.precoders[0].transpose(), stack_rows(sched.combiners));
        break;
    case MimoMode::varying_precoder:
        out.Theta = structured_product(ProductKind::kron, stack_cols(sched.precoders).transpose(), sched.combiners[0]);
        break;
    case MimoMode::varying_both:
    {
        ComplexMatrix w_agg_t = stack_rows(sched.combiners).transpose();
        out.Theta = structured_product(ProductKind::gen_khatri_rao, stack_cols(sched.precoders), w_agg_t, sched.M_T)
                        .transpose();
        break;
    }
    }
    out.A_agg = structured_product(ProductKind::kron, A_T.conjugate(), A_R);
    return out;
}

std::shared_ptr<const KroneckerBlockSensing> mimo_operator(const MimoFrameSchedule &sched, const ComplexMatrix &A_T,
                                                           const ComplexMatrix &A_R)
{
    sched.validate();
    const Index blocks = sched.mode == MimoMode::fixed_both ? 1 : sched.M_T;
    ComplexMatrix tx_factor(blocks, A_T.cols());
    std::vector<ComplexMatrix> rx_factor;
    rx_factor.reserve(static_cast<std::size_t>(blocks));
    for (Index s = 0; s < blocks; ++s)
    {
        tx_factor.row(s) = (A_T.adjoint() * sched.precoder(s)).transpose();
        rx_factor.push_back(sched.combiner(s) * A_R);
    }
    return std::make_shared<KroneckerBlockSensing>(std::move(tx_factor), std::move(rx_factor));
}

} // namespace hycov
