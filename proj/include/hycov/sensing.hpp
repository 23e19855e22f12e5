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

#ifndef HYCOV_SENSING_HPP
#define HYCOV_SENSING_HPP

#include "hycov/channel.hpp"
#include "hycov/numerics.hpp"
#include "hycov/rng.hpp"

#include <memory>
#include <span>
#include <vector>

namespace hycov
{

// Linear map from sparse gains to baseband measurements. Recovery only needs the adjoint
// applied to a few vectors and explicit access to selected columns, which lets the MIMO
// aggregate operators (M_R M_T x D_R D_T) stay in factored form.
class SensingOperator
{
public:
    virtual ~SensingOperator() = default;

    virtual Index rows() const = 0;
    virtual Index cols() const = 0;

    // Phi^* X, cols() x X.cols().
    virtual ComplexMatrix adjoint_times(const ComplexMatrix &x) const = 0;

    // Phi[:, idx] in the given order.
    virtual ComplexMatrix columns(std::span<const Index> idx) const = 0;
};

class DenseSensing final : public SensingOperator
{
public:
    explicit DenseSensing(ComplexMatrix phi);

    Index rows() const override { return phi_.rows(); }
    Index cols() const override { return phi_.cols(); }
    ComplexMatrix adjoint_times(const ComplexMatrix &x) const override;
    ComplexMatrix columns(std::span<const Index> idx) const override;

    const ComplexMatrix &matrix() const { return phi_; }

private:
    ComplexMatrix phi_;
};

// Row blocks s = 0..B-1 of r rows each; entry ((s, r), tx * D_R + rx) = tx_factor(s, tx) * rx_factor[s](r, rx).
// This is (f_s^T A_T^C) (x) (W_s A_R) stacked over s, i.e. Theta_agg * A_agg for all four schedules.
class KroneckerBlockSensing final : public SensingOperator
{
public:
    KroneckerBlockSensing(ComplexMatrix tx_factor, std::vector<ComplexMatrix> rx_factor);

    Index rows() const override { return rows_; }
    Index cols() const override { return tx_factor_.cols() * dict_rx_; }
    ComplexMatrix adjoint_times(const ComplexMatrix &x) const override;
    ComplexMatrix columns(std::span<const Index> idx) const override;

    // Dense Theta_agg * A_agg, for small instances and tests.
    ComplexMatrix to_dense() const;

private:
    ComplexMatrix tx_factor_;               // B x D_T
    std::vector<ComplexMatrix> rx_factor_;  // B entries of r x D_R
    Index block_rows_ = 0, dict_rx_ = 0, rows_ = 0;
};

using OperatorPtr = std::shared_ptr<const SensingOperator>;

// Per-snapshot combiners and sensing matrices. A fixed ensemble stores one draw and
// returns it for every snapshot.
struct SensingEnsemble
{
    std::vector<ComplexMatrix> W_rf; // M x N, unit modulus
    std::vector<ComplexMatrix> W_bb; // M x M
    std::vector<ComplexMatrix> W;    // W_bb * W_rf
    std::vector<OperatorPtr> Phi;    // DenseSensing(W * A)
    bool time_varying = true;
    Index T = 0;

    std::size_t slot(Index t) const { return time_varying ? static_cast<std::size_t>(t) : 0; }
    const ComplexMatrix &combiner(Index t) const { return W[slot(t)]; }
    const ComplexMatrix &phi(Index t) const;
    OperatorPtr op(Index t) const { return Phi[slot(t)]; }
};

struct WhitenedCombiner
{
    ComplexMatrix W_bb; // (W_rf W_rf^*)^{-1/2}
    ComplexMatrix W;    // W_bb W_rf
    ComplexMatrix Phi;  // W A
};

struct FrameMetrics
{
    double mutual_coherence = 0.0;
    double welch_bound = 0.0;
};

enum class ProductKind
{
    kron,
    khatri_rao,
    gen_khatri_rao
};

// Entries exp(j theta), theta iid uniform on [0, 2 pi).
ComplexMatrix random_analog_combiner(Index M, Index N, Rng &rng);

// Baseband whitener that turns W_rf A into a tight frame.
WhitenedCombiner whiten_to_tight_frame(const ComplexMatrix &W_rf, const ComplexMatrix &A);

// T whitened snapshots (time_varying) or one reused draw (fixed).
SensingEnsemble make_ensemble(Index M, const Dictionary &dict, Index T, bool time_varying, Rng &rng);

// Mutual coherence of the columns and the Welch bound for a rows x cols frame.
FrameMetrics frame_metrics(const ComplexMatrix &phi);

// kron(A, B); khatri_rao: column-wise kron; gen_khatri_rao: [A_1 (x) B_1, ..., A_K (x) B_K].
ComplexMatrix structured_product(ProductKind kind, const ComplexMatrix &a, const ComplexMatrix &b, Index partitions = 1);

// ---- multi-antenna MS schedules --------------------------------------------------------

enum class MimoMode
{
    fixed_both = 1,        // common f_t and W_t, received symbols averaged
    varying_combiner = 2,  // common f_t, per-symbol W_{t,s}, row stack
    varying_precoder = 3,  // per-symbol f_{t,s}, common W_t, column stack
    varying_both = 4       // per-symbol f_{t,s} and W_{t,s}, row stack
};

// Precoders and combiners of one frame. Fixed quantities are stored once, varying ones
// once per training symbol.
struct MimoFrameSchedule
{
    MimoMode mode = MimoMode::varying_both;
    Index M_T = 1;
    std::vector<ComplexVector> precoders; // N_T, unit norm
    std::vector<ComplexMatrix> combiners; // M_R x N_R, whitened (W W^* = I)

    // Throws ConfigError if the stored counts do not match the mode.
    void validate() const;
    const ComplexVector &precoder(Index s) const { return precoders.size() == 1 ? precoders[0] : precoders[static_cast<std::size_t>(s)]; }
    const ComplexMatrix &combiner(Index s) const { return combiners.size() == 1 ? combiners[0] : combiners[static_cast<std::size_t>(s)]; }
    Index aggregate_rows() const;
};

struct AggregateSensing
{
    ComplexMatrix Theta; // rows x N_T N_R
    ComplexMatrix A_agg; // N_T N_R x D_T D_R, A_T^C (x) A_R
};

// Unit-norm random-phase precoder exp(j theta) / sqrt(N_T).
ComplexVector random_precoder(Index N_T, Rng &rng);

// Random schedule for one frame: whitened random-phase combiners and unit-norm precoders,
// drawn once or per symbol according to the mode.
MimoFrameSchedule draw_mimo_schedule(MimoMode mode, Index M_T, Index M_R, Index N_R, Index N_T, Rng &rng);

// Dense Theta_agg and A_agg of the chosen schedule.
AggregateSensing aggregate_mimo_sensing(const MimoFrameSchedule &sched, const ComplexMatrix &A_T, const ComplexMatrix &A_R);

// Factored Theta_agg * A_agg.
std::shared_ptr<const KroneckerBlockSensing> mimo_operator(const MimoFrameSchedule &sched, const ComplexMatrix &A_T,
                                                           const ComplexMatrix &A_R);

} // namespace hycov

#endif
