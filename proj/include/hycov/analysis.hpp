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

#ifndef HYCOV_ANALYSIS_HPP
#define HYCOV_ANALYSIS_HPP

#include "hycov/numerics.hpp"
#include "hycov/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hycov
{

// Recovery metrics at iteration L_o + 1, given that S_o ⊂ S was selected before.
// G is L x T with row i belonging to S[i]. A single entry in Phis is used for every
// snapshot (fixed sensing); otherwise Phis.size() must equal G.cols().
// The returned ratio is below 1 exactly when the next greedy selection lies in S.
double rho_ds(std::span<const Index> S, std::span<const Index> S_o, const std::vector<ComplexMatrix> &Phis,
              const ComplexMatrix &G);

double rho_dc(std::span<const Index> S, std::span<const Index> S_o, const std::vector<ComplexMatrix> &Phis,
              const ComplexMatrix &G);

// Large-T limit of rho_ds for a fixed Phi and unit-variance uncorrelated gains.
double rho_s_limit(std::span<const Index> S, std::span<const Index> S_o, const ComplexMatrix &Phi);

// (1 + (M - N + (M - L_o)(N - L_o - 1)) / ((N - M)(L - L_o)))^-1; needs N > M >= L > L_o >= 0.
double rho_ds_upper_bound(Index N, Index M, Index L, Index L_o);

// Omega = Psi_{N\S_o}^* Psi_{N\S_o} with Psi = (I - P_{S_o}) Phi.
struct OmegaIdentities
{
    double trace = 0.0;
    double frobenius2 = 0.0;
};
OmegaIdentities omega_identities(const ComplexMatrix &Phi, std::span<const Index> S_o);

// Tr(B^* (Q_dc - Q_ds) B) with B = Phi_{S\S_o}, Q_ds = (I - P) B B^* (I - P), Q_dc = B B^* - P B B^* P.
double hermitian_gain_trace(const ComplexMatrix &Phi, std::span<const Index> S, std::span<const Index> S_o);

// ---- Monte Carlo ---------------------------------------------------------------------------

struct CoherenceParams
{
    Index N = 64; // also the dictionary size
    Index M = 8;
    Index L = 8;
    Index L_o = 0;
    Index T = 1;

    void validate() const;
};

// One draw: uniform S, uniform S_o ⊂ S, T whitened time-varying sensing matrices, CN(0,1) gains.
struct CoherenceDraw
{
    double rho_s = 0.0;       // fixed Phi_1 for all T snapshots
    double rho_s_limit = 0.0; // fixed Phi_1, T -> infinity
    double rho_ds = 0.0;
    double rho_dc = 0.0;
    double hermitian_gain = 0.0; // hermitian_gain_trace on Phi_1
};

CoherenceDraw coherence_trial(const CoherenceParams &p, Rng &rng);

std::vector<CoherenceDraw> mc_coherence(const CoherenceParams &p, Index trials, std::uint64_t seed, unsigned threads = 1);

enum class CoherenceKind
{
    s,
    s_limit,
    ds,
    dc,
    ds_bound
};

// Raw sorted samples; sample i has cumulative probability (i + 1) / n.
struct EmpiricalCdf
{
    std::vector<double> values;

    double probability(std::size_t i) const;
    double fraction_below(double x) const;
    double quantile(double p) const;
    double mean() const;
    double stddev() const;
};

EmpiricalCdf make_cdf(std::vector<double> samples);

EmpiricalCdf mc_cdf(CoherenceKind kind, const CoherenceParams &p, Index trials, std::uint64_t seed, unsigned threads = 1);

enum class GreedyAlgorithm
{
    dsomp,
    dcomp
};

// Per-iteration success with conditioning on earlier successes: attempts[n] counts trials
// whose first n selections all lay in S.
struct IterationSuccess
{
    std::vector<Index> attempts;
    std::vector<Index> successes;

    double rate(std::size_t n) const;
    double full_recovery(Index trials) const;
};

IterationSuccess success_prob_per_iteration(GreedyAlgorithm alg, const CoherenceParams &p, Index trials,
                                            std::uint64_t seed, unsigned threads = 1);

} // namespace hycov

#endif
