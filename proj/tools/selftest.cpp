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

#include "selftest.hpp"

#include "hycov/analysis.hpp"
#include "hycov/channel.hpp"
#include "hycov/numerics.hpp"
#include "hycov/recovery.hpp"
#include "hycov/sensing.hpp"
#include "hycov/simulate.hpp"
#include "hycov/tolerances.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace hycov::cli
{

namespace
{

struct Check
{
    std::string name;
    std::function<bool()> run;
};

ComplexMatrix stack(const std::vector<ComplexMatrix> &v)
{
    ComplexMatrix out(v.front().rows(), static_cast<Index>(v.size()));
    for (std::size_t t = 0; t < v.size(); ++t)
        out.col(static_cast<Index>(t)) = v[t].col(0);
    return out;
}

} // namespace

bool run_selftest(std::ostream &os)
{
    const std::vector<Check> checks{
        {"dictionary tight frame",
         []
         {
             const Dictionary d = build_dictionary(64, 256);
             const ComplexMatrix e = d.A * d.A.adjoint() - 256.0 * ComplexMatrix::Identity(64, 64);
             return e.norm() <= tol::dictionary_frame * 256.0;
         }},
        {"whitened sensing tight frame",
         []
         {
             Rng rng(11);
             const Dictionary d = build_dictionary(64, 64);
             const SensingEnsemble e = make_ensemble(8, d, 20, true, rng);
             for (Index t = 0; t < 20; ++t)
             {
                 const ComplexMatrix f = e.phi(t) * e.phi(t).adjoint() - 64.0 * ComplexMatrix::Identity(8, 8);
                 if (f.norm() > tol::tight_frame * 64.0)
                     return false;
             }
             return true;
         }},
        {"projector idempotent",
         []
         {
             Rng rng(12);
             const ComplexMatrix P = projector(complex_normal_matrix(rng, 8, 3));
             return (P * P - P).norm() <= tol::projector && (P - P.adjoint()).norm() <= tol::projector;
         }},
        {"eigen reconstruction",
         []
         {
             Rng rng(13);
             const ComplexMatrix b = complex_normal_matrix(rng, 16, 16);
             const HermitianMatrix h(b + b.adjoint());
             const EigenDecomposition e = eig_hermitian(h);
             const ComplexMatrix r = e.vectors * e.values.cast<cdouble>().asDiagonal() * e.vectors.adjoint();
             return (r - h.matrix()).norm() <= tol::eig_residual * h.matrix().norm();
         }},
        {"estimator reductions",
         []
         {
             Rng rng(14);
             const Dictionary d = build_dictionary(32, 64);
             ScenarioConfig cfg;
             cfg.N = 32, cfg.M = 8, cfg.D = 64, cfg.L = 4, cfg.T = 6, cfg.on_grid = true;
             const SparseChannelRealization ch = draw_channel(cfg, rng);
             const SensingEnsemble fixed = make_ensemble(8, d, cfg.T, false, rng);
             const MeasurementSet m = simulate_narrowband(ch, fixed, 20.0, rng);
             const ComplexMatrix Y = stack(m.frames);
             std::vector<OperatorPtr> ops(static_cast<std::size_t>(cfg.T), fixed.op(0));
             const auto a = somp(fixed.phi(0), Y, cfg.L), b = dsomp(ops, m.frames, cfg.L);
             const auto c = comp(fixed.phi(0), Y, cfg.L), e = dcomp(ops, m.frames, cfg.L);
             return a.support == b.support && (a.gains - b.gains).norm() <= 1e-12 * (1.0 + a.gains.norm()) &&
                    c.support == e.support && (c.rg_block - e.rg_block).norm() <= 1e-12 * (1.0 + c.rg_block.norm());
         }},
        {"omega trace identity",
         []
         {
             Rng rng(15);
             const Dictionary d = build_dictionary(32, 32);
             const SensingEnsemble e = make_ensemble(8, d, 1, false, rng);
             const std::vector<Index> so{3, 17, 20};
             const OmegaIdentities o = omega_identities(e.phi(0), so);
             return std::abs(o.trace - 32.0 * 5.0) <= 1e-6 * 160.0 &&
                    std::abs(o.frobenius2 - 32.0 * 32.0 * 5.0) <= 1e-6 * 5120.0;
         }},
        {"mimo aggregate model",
         []
         {
             Rng rng(16);
             const Dictionary rx = build_dictionary(4, 8), tx = build_dictionary(4, 8);
             for (int mode = 1; mode <= 4; ++mode)
             {
                 const auto s = draw_mimo_schedule(static_cast<MimoMode>(mode), 2, 2, 4, 4, rng);
                 const AggregateSensing agg = aggregate_mimo_sensing(s, tx.A, rx.A);
                 const auto op = mimo_operator(s, tx.A, rx.A);
                 if ((agg.Theta * agg.A_agg - op->to_dense()).norm() > 1e-10 * (1.0 + op->to_dense().norm()))
                     return false;
             }
             return true;
         }},
        {"closed-form bound",
         [] { return rho_ds_upper_bound(64, 8, 8, 0) == 0.5 && rho_ds_upper_bound(64, 8, 8, 7) == 1.0; }},
    };

    bool ok = true;
    for (const auto &c : checks)
    {
        bool pass = false;
        try
        {
            pass = c.run();
        }
        catch (const std::exception &e)
        {
            os << "  (" << e.what() << ")\n";
        }
        os << (pass ? "PASS " : "FAIL ") << c.name << '\n';
        ok = ok && pass;
    }
    return ok;
}

} // namespace hycov::cli
