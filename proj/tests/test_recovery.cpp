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

#include "hycov/channel.hpp"
#include "hycov/errors.hpp"
#include "hycov/recovery.hpp"
#include "hycov/sensing.hpp"
#include "hycov/simulate.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <limits>

using namespace hycov;

namespace
{

constexpr double noiseless = std::numeric_limits<double>::infinity();

struct Instance
{
    SparseChannelRealization ch;
    SensingEnsemble fixed, varying;
    std::vector<ComplexMatrix> y_fixed, y_varying;
    ComplexMatrix Y_fixed; // M x T
};

Instance make_instance(const ScenarioConfig &cfg, const Dictionary &d, Rng &rng, double snr_db = noiseless)
{
    Instance in;
    in.ch = draw_channel(cfg, rng);
    in.fixed = make_ensemble(cfg.M, d, cfg.T, false, rng);
    in.varying = make_ensemble(cfg.M, d, cfg.T, true, rng);
    in.y_fixed = simulate_narrowband(in.ch, in.fixed, snr_db, rng).frames;
    in.y_varying = simulate_narrowband(in.ch, in.varying, snr_db, rng).frames;
    in.Y_fixed.resize(cfg.M, cfg.T);
    for (Index t = 0; t < cfg.T; ++t)
        in.Y_fixed.col(t) = in.y_fixed[static_cast<std::size_t>(t)].col(0);
    return in;
}

std::vector<OperatorPtr> repeat(const OperatorPtr &op, Index T)
{
    return std::vector<OperatorPtr>(static_cast<std::size_t>(T), op);
}

std::vector<OperatorPtr> ops_of(const SensingEnsemble &e)
{
    std::vector<OperatorPtr> out;
    for (Index t = 0; t < e.T; ++t)
        out.push_back(e.op(t));
    return out;
}

bool same_set(std::vector<Index> a, std::vector<Index> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

double rel(const ComplexMatrix &a, const ComplexMatrix &b)
{
    return (a - b).norm() / std::max(1.0, b.norm());
}

// least-squares residual of y on the columns S, via an independent solver
double ls_residual(const ComplexMatrix &Phi, const std::vector<Index> &S, const ComplexVector &y)
{
    ComplexMatrix B(Phi.rows(), static_cast<Index>(S.size()));
    for (std::size_t k = 0; k < S.size(); ++k)
        B.col(static_cast<Index>(k)) = Phi.col(S[k]);
    const ComplexVector x = Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(B).solve(y);
    return (y - B * x).norm();
}

} // namespace

TEST_CASE("OMP closed-form examples", "[recovery][omp]")
{
    const ComplexMatrix I = ComplexMatrix::Identity(4, 4);
    ComplexVector y = ComplexVector::Zero(4);
    y(2) = 3.0;
    const SparseEstimate e = omp(I, y, 1);
    REQUIRE(e.support == std::vector<Index>{2});
    CHECK(std::abs(e.gains(0, 0) - cdouble(3.0)) < 1e-15);
    REQUIRE(e.residual_norms.size() == 2);
    CHECK(e.residual_norms[0] == Catch::Approx(3.0));
    CHECK(e.residual_norms[1] == 0.0);

    const SparseEstimate z = omp(I, ComplexVector::Zero(4), 2);
    CHECK(z.support == std::vector<Index>{0, 1});
    CHECK(z.gains.norm() == 0.0);
}

TEST_CASE("OMP reports dependent selections", "[recovery][omp]")
{
    ComplexMatrix phi = ComplexMatrix::Zero(2, 3);
    phi(0, 0) = 1.0;
    phi(0, 1) = 1.0;
    phi(1, 2) = 1.0;
    ComplexVector y = ComplexVector::Zero(2);
    y(0) = 1.0;
    // after column 0 every remaining score is zero, so the tie rule picks the duplicate column 1
    CHECK_THROWS_AS(omp(phi, y, 2), SingularityError);
}

TEST_CASE("OMP agrees with exhaustive support search when the residual vanishes", "[recovery][omp]")
{
    ScenarioConfig cfg;
    cfg.N = 16, cfg.M = 8, cfg.D = 16, cfg.L = 2, cfg.T = 1, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(501);
    int checked = 0;
    for (int rep = 0; rep < 50; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng);
        const ComplexVector y = in.y_fixed[0].col(0);
        const SparseEstimate e = omp(in.fixed.phi(0), y, 2);
        if (e.residual_norms.back() > 1e-9 * y.norm())
            continue;
        ++checked;
        double best = std::numeric_limits<double>::infinity();
        std::vector<Index> arg;
        for (Index i = 0; i < 16; ++i)
            for (Index j = i + 1; j < 16; ++j)
            {
                const double r = ls_residual(in.fixed.phi(0), {i, j}, y);
                if (r < best)
                    best = r, arg = {i, j};
            }
        CHECK(same_set(e.support, arg));
        CHECK(same_set(e.support, in.ch.support));
    }
    CHECK(checked > 10);
}

TEST_CASE("SOMP reductions", "[recovery][somp]")
{
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 64, cfg.L = 3, cfg.T = 5, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(502);
    for (int rep = 0; rep < 20; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng, 5.0);
        const ComplexVector y = in.Y_fixed.col(0);
        const SparseEstimate a = omp(in.fixed.phi(0), y, 3), b = somp(in.fixed.phi(0), y, 3);
        CHECK(a.support == b.support);
        CHECK(rel(a.gains, b.gains) <= 1e-12);

        const ComplexMatrix copies = y.replicate(1, 4);
        CHECK(somp(in.fixed.phi(0), copies, 3).support == a.support);
    }
}

TEST_CASE("SOMP recovers at least as often as OMP on one snapshot", "[recovery][somp][statistics]")
{
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 32, cfg.L = 3, cfg.T = 16, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(503);
    int hit_omp = 0, hit_somp = 0;
    for (int rep = 0; rep < 200; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng);
        hit_omp += same_set(omp(in.fixed.phi(0), in.Y_fixed.col(0), 3).support, in.ch.support);
        hit_somp += same_set(somp(in.fixed.phi(0), in.Y_fixed, 3).support, in.ch.support);
    }
    CHECK(hit_somp >= hit_omp);
}

TEST_CASE("residual norms never increase for residual-rule estimators", "[recovery]")
{
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 64, cfg.L = 6, cfg.T = 10, cfg.on_grid = false;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(504);
    for (int rep = 0; rep < 20; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng, 0.0);
        for (const auto &e : {omp(in.fixed.phi(0), in.Y_fixed.col(0), 6), somp(in.fixed.phi(0), in.Y_fixed, 6),
                              dsomp(ops_of(in.varying), in.y_varying, 6)})
        {
            REQUIRE(e.residual_norms.size() == 7);
            for (std::size_t n = 1; n < e.residual_norms.size(); ++n)
                CHECK(e.residual_norms[n] <= e.residual_norms[n - 1] * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("DSOMP reductions", "[recovery][dsomp]")
{
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 64, cfg.L = 4, cfg.T = 6, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(505);
    for (int rep = 0; rep < 20; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng, 10.0);
        const SparseEstimate a = somp(in.fixed.phi(0), in.Y_fixed, 4);
        const SparseEstimate b = dsomp(repeat(in.fixed.op(0), cfg.T), in.y_fixed, 4);
        CHECK(a.support == b.support);
        CHECK(rel(b.gains, a.gains) <= 1e-12);

        const SparseEstimate one = dsomp({in.varying.op(0)}, {in.y_varying[0]}, 4);
        const SparseEstimate ref = omp(in.varying.phi(0), in.y_varying[0].col(0), 4);
        CHECK(one.support == ref.support);
        CHECK(rel(one.gains, ref.gains) <= 1e-12);
    }
}

TEST_CASE("noiseless correct recovery leaves no residual", "[recovery]")
{
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 32, cfg.L = 3, cfg.T = 12, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(506);
    int checked = 0;
    for (int rep = 0; rep < 30; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng);
        const SparseEstimate s = dsomp(ops_of(in.varying), in.y_varying, 3);
        if (same_set(s.support, in.ch.support))
        {
            ++checked;
            CHECK(s.residual_norms.back() <= 1e-9 * s.residual_norms.front());
        }
        const CovarianceEstimate c = comp(in.fixed.phi(0), in.Y_fixed, 3);
        if (same_set(c.support, in.ch.support))
            CHECK(c.residual_norms.back() <= 1e-9 * c.residual_norms.front());
    }
    CHECK(checked > 20);
}

TEST_CASE("time-varying unitary mixing does not change the DSOMP selections", "[recovery][dsomp]")
{
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 32, cfg.L = 4, cfg.T = 8, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(507);
    int same = 0;
    for (int rep = 0; rep < 100; ++rep)
    {
        const SparseChannelRealization ch = draw_channel(cfg, rng);
        const SensingEnsemble base = make_ensemble(cfg.M, d, 1, false, rng);
        const ComplexMatrix &phi0 = base.phi(0);
        std::vector<OperatorPtr> ops;
        std::vector<ComplexMatrix> ys;
        ComplexMatrix Y(cfg.M, cfg.T);
        for (Index t = 0; t < cfg.T; ++t)
        {
            ComplexVector g = ComplexVector::Zero(cfg.D);
            for (std::size_t l = 0; l < ch.support.size(); ++l)
                g(ch.support[l]) = ch.gains(static_cast<Index>(l), t);
            const ComplexMatrix U = random_unitary(cfg.M, rng);
            const ComplexMatrix phi_t = U * phi0;
            ops.push_back(std::make_shared<DenseSensing>(phi_t));
            ys.push_back(phi_t * g);
            Y.col(t) = phi0 * g;
        }
        same += dsomp(ops, ys, cfg.L).support == somp(phi0, Y, cfg.L).support;
    }
    CHECK(same == 100);
}

TEST_CASE("DSOMP with time-varying sensing beats fixed-sensing SOMP", "[recovery][dsomp][statistics]")
{
    ScenarioConfig cfg;
    cfg.N = 64, cfg.M = 8, cfg.D = 64, cfg.L = 8, cfg.T = 64, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(508);
    int hit_ds = 0, hit_s = 0;
    for (int rep = 0; rep < 200; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng);
        hit_ds += same_set(dsomp(ops_of(in.varying), in.y_varying, 8).support, in.ch.support);
        hit_s += same_set(somp(in.fixed.phi(0), in.Y_fixed, 8).support, in.ch.support);
    }
    CHECK(hit_ds >= 180);
    CHECK(hit_s <= hit_ds - 40);
}

TEST_CASE("COMP closed-form examples", "[recovery][comp]")
{
    const ComplexMatrix I = ComplexMatrix::Identity(6, 6);
    ComplexMatrix Y = ComplexMatrix::Zero(6, 6);
    const double diag[6] = {0.3, 2.0, 0.1, 5.0, 1.0, 0.7};
    for (Index i = 0; i < 6; ++i)
        Y(i, i) = std::sqrt(diag[i] * 6.0);
    const CovarianceEstimate e = comp(I, Y, 3);
    CHECK(e.support == std::vector<Index>{3, 1, 4});
    CHECK(std::abs(e.rg_block(0, 0) - cdouble(5.0)) < 1e-12);

    Rng rng(509);
    const Dictionary d = build_dictionary(16, 32);
    const SensingEnsemble ens = make_ensemble(8, d, 1, false, rng);
    const ComplexMatrix y = cdouble(0.0, 1.7) * ens.phi(0).col(11);
    CHECK(comp(ens.phi(0), y, 1).support == std::vector<Index>{11});
}

TEST_CASE("COMP block equals the vectorised least-squares solution", "[recovery][comp]")
{
    Rng rng(510);
    for (int rep = 0; rep < 10; ++rep)
    {
        const ComplexMatrix phi = complex_normal_matrix(rng, 4, 8);
        const ComplexMatrix Y = complex_normal_matrix(rng, 4, 5);
        const CovarianceEstimate e = comp(phi, Y, 2);
        const ComplexMatrix Ry = Y * Y.adjoint() / 5.0;

        // vec(Ry) = (conj(Phi_S) kron Phi_S) vec(R), solved by orthogonal decomposition
        ComplexMatrix B(4, 2);
        B.col(0) = phi.col(e.support[0]);
        B.col(1) = phi.col(e.support[1]);
        ComplexMatrix K(16, 4);
        for (Index j = 0; j < 2; ++j)
            for (Index i = 0; i < 2; ++i)
                for (Index q = 0; q < 4; ++q)
                    for (Index p = 0; p < 4; ++p)
                        K(q * 4 + p, j * 2 + i) = B(p, i) * std::conj(B(q, j));
        const ComplexVector r = Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(K).solve(Ry.reshaped());
        const ComplexMatrix R = r.reshaped(2, 2);
        CHECK((e.rg_block - R).norm() <= 1e-10 * R.norm());
        CHECK((e.rg_block - e.rg_block.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("COMP residual matrices stay Hermitian", "[recovery][comp]")
{
    Rng rng(511);
    const Dictionary d = build_dictionary(32, 64);
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 64, cfg.L = 5, cfg.T = 20, cfg.on_grid = true;
    for (int rep = 0; rep < 10; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng, 5.0);
        const CovarianceEstimate e = comp(in.fixed.phi(0), in.Y_fixed, 5);
        const ComplexMatrix Ry = in.Y_fixed * in.Y_fixed.adjoint() / 20.0;
        for (std::size_t n = 1; n <= e.support.size(); ++n)
        {
            ComplexMatrix B(8, static_cast<Index>(n));
            for (std::size_t k = 0; k < n; ++k)
                B.col(static_cast<Index>(k)) = in.fixed.phi(0).col(e.support[k]);
            const ComplexMatrix P = B * Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(B).pseudoInverse();
            const ComplexMatrix V = Ry - P * Ry * P.adjoint();
            CHECK((V - V.adjoint()).norm() <= 1e-12 * Ry.norm());
            CHECK(V.norm() == Catch::Approx(e.residual_norms[n]).epsilon(1e-9));
        }
    }
}

TEST_CASE("DCOMP reductions", "[recovery][dcomp]")
{
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 64, cfg.L = 4, cfg.T = 10, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(512);
    for (int rep = 0; rep < 20; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng, 10.0);
        const CovarianceEstimate a = comp(in.fixed.phi(0), in.Y_fixed, 4);
        const CovarianceEstimate b = dcomp(repeat(in.fixed.op(0), cfg.T), in.y_fixed, 4);
        CHECK(a.support == b.support);
        CHECK(rel(b.rg_block, a.rg_block) <= 1e-12);
    }

    // one snapshot, one path
    const SensingEnsemble ens = make_ensemble(8, d, 1, true, rng);
    const ComplexMatrix y = 0.4 * ens.phi(0).col(40);
    CHECK(dcomp({ens.op(0)}, {y}, 1).support == std::vector<Index>{40});
}

TEST_CASE("DCOMP recovers the full support at least as often as DSOMP", "[recovery][dcomp][statistics]")
{
    ScenarioConfig cfg;
    cfg.N = 64, cfg.M = 8, cfg.D = 64, cfg.L = 8, cfg.T = 64, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(513);
    int hit_dc = 0, hit_ds = 0;
    for (int rep = 0; rep < 200; ++rep)
    {
        const Instance in = make_instance(cfg, d, rng);
        hit_dc += same_set(dcomp(ops_of(in.varying), in.y_varying, 8).support, in.ch.support);
        hit_ds += same_set(dsomp(ops_of(in.varying), in.y_varying, 8).support, in.ch.support);
    }
    CHECK(hit_dc >= hit_ds);
}

TEST_CASE("WB-DCOMP reductions", "[recovery][wb_dcomp]")
{
    ScenarioConfig cfg;
    cfg.N = 32, cfg.M = 8, cfg.D = 64, cfg.L = 4, cfg.T = 7, cfg.K = 1, cfg.N_cp = 4, cfg.on_grid = true;
    const Dictionary d = build_dictionary(cfg.N, cfg.D);
    Rng rng(514);
    for (int rep = 0; rep < 20; ++rep)
    {
        const SparseChannelRealization ch = draw_wideband_channel(cfg, rng);
        const SensingEnsemble ens = make_ensemble(cfg.M, d, cfg.T, true, rng);
        const MeasurementSet m = simulate_wideband(ch, ens, 10.0, rng);
        const CovarianceEstimate a = wb_dcomp(ops_of(ens), m.frames, 4), b = dcomp(ops_of(ens), m.frames, 4);
        CHECK(a.support == b.support);
        CHECK(rel(a.rg_block, b.rg_block) <= 1e-12);
    }

    ScenarioConfig one = cfg;
    one.T = 1, one.K = 16;
    for (int rep = 0; rep < 20; ++rep)
    {
        const SparseChannelRealization ch = draw_wideband_channel(one, rng);
        const SensingEnsemble ens = make_ensemble(one.M, d, 1, true, rng);
        const MeasurementSet m = simulate_wideband(ch, ens, 10.0, rng);
        const CovarianceEstimate a = wb_dcomp({ens.op(0)}, m.frames, 4), b = comp(ens.phi(0), m.frames[0], 4);
        CHECK(a.support == b.support);
        CHECK(rel(a.rg_block, b.rg_block) <= 1e-12);
    }
}

TEST_CASE("covariance reconstruction", "[recovery][reconstruct]")
{
    const Dictionary d = build_dictionary(8, 16);

    SparseEstimate zero{{1, 4}, ComplexMatrix::Zero(2, 3), {}};
    CHECK(channel_covariance(reconstruct_covariance(zero), d.A).matrix().norm() == 0.0);

    SparseEstimate unit{{6}, ComplexMatrix::Ones(1, 1), {}};
    const ComplexMatrix a = d.A.col(6);
    CHECK((channel_covariance(reconstruct_covariance(unit), d.A).matrix() - a * a.adjoint()).norm() < 1e-12);

    Rng rng(515);
    for (auto [k, T] : {std::pair<Index, Index>{5, 2}, {3, 7}, {4, 4}})
    {
        std::vector<Index> S;
        for (Index i = 0; i < k; ++i)
            S.push_back(3 * i);
        const SparseEstimate est{S, complex_normal_matrix(rng, k, T), {}};
        const CovarianceEstimate c = reconstruct_covariance(est);
        const HermitianMatrix Rh = channel_covariance(c, d.A);
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Rh.matrix());
        const double top = es.eigenvalues().maxCoeff();
        Index rank = 0;
        for (Index i = 0; i < 8; ++i)
            rank += es.eigenvalues()(i) > 1e-10 * top;
        CHECK(rank <= std::min(k, T));

        const ComplexMatrix Rg = c.dense_rg(16);
        CHECK((Rh.matrix() - d.A * Rg * d.A.adjoint()).norm() <= 1e-9 * Rh.matrix().norm());
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eb(c.rg_block);
        CHECK(eb.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, top));
    }
}

TEST_CASE("greedy selection honours the initial support", "[recovery]")
{
    const ComplexMatrix I = ComplexMatrix::Identity(4, 4);
    ComplexVector y(4);
    y << 1.0, 4.0, 2.0, 3.0;
    const std::vector<MeasurementBlock> blocks{{std::make_shared<DenseSensing>(I), y}};
    const std::vector<Index> init{1};
    const GreedyTrace t = greedy_select(blocks, 3, SelectionRule::residual, init);
    CHECK(t.support == std::vector<Index>{1, 3, 2});
    CHECK(t.residual_norms.size() == 3);

    const std::vector<Index> bad{7};
    CHECK_THROWS_AS(greedy_select(blocks, 2, SelectionRule::residual, bad), ArgumentError);
    CHECK_THROWS_AS(greedy_select(blocks, 5, SelectionRule::residual), ConfigError);
}
