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

#include "hycov/numerics.hpp"
#include "hycov/errors.hpp"
#include "hycov/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hycov
{

void require_finite(const ComplexMatrix &m, const char *what)
{
    if (m.rows() < 1 || m.cols() < 1)
        throw DimensionError(std::string(what) + ": matrix must have at least one row and one column");
    if (!m.allFinite())
        throw ArgumentError(std::string(what) + ": matrix contains NaN or Inf entries");
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix &h)
{
    if (h.rows() != h.cols())
        throw DimensionError("HermitianMatrix: input is " + std::to_string(h.rows()) + "x" +
                             std::to_string(h.cols()) + ", expected square");
    require_finite(h, "HermitianMatrix");
    m_ = 0.5 * (h + h.adjoint());
    for (Index i = 0; i < m_.rows(); ++i)
        m_(i, i) = cdouble(m_(i, i).real(), 0.0);
}

HermitianMatrix HermitianMatrix::zero(Index dim)
{
    return HermitianMatrix(ComplexMatrix::Zero(dim, dim));
}

ComplexMatrix pseudoinverse(const ComplexMatrix &m)
{
    require_finite(m, "pseudoinverse");
    const Index k = m.cols();
    if (m.rows() < k)
        throw SingularityError("pseudoinverse: " + std::to_string(m.rows()) + "x" + std::to_string(k) +
                                   " block cannot have full column rank (support size " + std::to_string(k) + ")",
                               static_cast<long>(k));

    const ComplexMatrix gram = m.adjoint() * m;
    Eigen::LLT<ComplexMatrix> llt(gram);
    const auto singular = [&]()
    {
        return SingularityError("pseudoinverse: selected block is rank deficient (support size " +
                                    std::to_string(k) + ")",
                                static_cast<long>(k));
    };
    if (llt.info() != Eigen::Success)
        throw singular();

    // Pivot ratio of the Cholesky factor squared bounds cond(M^* M) from below.
    const RealVector pivots = llt.matrixL().toDenseMatrix().diagonal().real();
    const double lo = pivots.minCoeff(), hi = pivots.maxCoeff();
    if (!(lo > 0.0) || (hi / lo) * (hi / lo) > tol::pinv_condition)
        throw singular();

    return llt.solve(m.adjoint());
}

ComplexMatrix projector(const ComplexMatrix &b)
{
    return b * pseudoinverse(b);
}

EigenDecomposition eig_hermitian(const HermitianMatrix &h)
{
    const Index n = h.dim();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::Identity(n, n);

    const double scale = a.norm();
    const auto off_diagonal = [&]()
    {
        double s = 0.0;
        for (Index q = 1; q < n; ++q)
            for (Index p = 0; p < q; ++p)
                s += std::norm(a(p, q));
        return std::sqrt(s);
    };

    bool converged = scale == 0.0 || n == 1;
    for (int sweep = 0; sweep < tol::jacobi_max_sweeps && !converged; ++sweep)
    {
        if (off_diagonal() <= 1e-15 * scale)
        {
            converged = true;
            break;
        }
        for (Index q = 1; q < n; ++q)
        {
            for (Index p = 0; p < q; ++p)
            {
                const cdouble apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0)
                    continue;

                // Phase-rotate q so that a(p,q) becomes real, then apply a real Givens rotation.
                const cdouble phase = std::conj(apq / mag);
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0)
                    t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const cdouble jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

                for (Index k = 0; k < n; ++k)
                {
                    const cdouble x = a(k, p), y = a(k, q);
                    a(k, p) = x * jpp + y * jqp;
                    a(k, q) = x * jpq + y * jqq;
                }
                for (Index k = 0; k < n; ++k)
                {
                    const cdouble x = a(p, k), y = a(q, k);
                    a(p, k) = std::conj(jpp) * x + std::conj(jqp) * y;
                    a(q, k) = std::conj(jpq) * x + std::conj(jqq) * y;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (Index k = 0; k < n; ++k)
                {
                    const cdouble x = v(k, p), y = v(k, q);
                    v(k, p) = x * jpp + y * jqp;
                    v(k, q) = x * jpq + y * jqq;
                }
            }
        }
    }
    if (!converged && off_diagonal() > 1e-15 * scale)
        throw ConvergenceError("eig_hermitian: Jacobi iteration did not converge within " +
                               std::to_string(tol::jacobi_max_sweeps) + " sweeps (dim " + std::to_string(n) + ")");

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index i, Index j)
                     { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition out{RealVector(n), ComplexMatrix(n, n)};
    for (Index k = 0; k < n; ++k)
    {
        const Index src = order[static_cast<std::size_t>(k)];
        out.values(k) = a(src, src).real();
        out.vectors.col(k) = v.col(src);
    }
    return out;
}

ComplexMatrix inv_sqrt_psd(const HermitianMatrix &h)
{
    const EigenDecomposition ed = eig_hermitian(h);
    const double largest = ed.values(0);
    const double smallest = ed.values(ed.values.size() - 1);
    if (!(largest > 0.0) || smallest <= tol::pd_relative * largest)
        throw DefinitenessError("inv_sqrt_psd: matrix is not positive definite (smallest eigenvalue " +
                                    std::to_string(smallest) + ")",
                                smallest);
    const RealVector d = ed.values.cwiseSqrt().cwiseInverse();
    return ed.vectors * d.asDiagonal() * ed.vectors.adjoint();
}

ComplexMatrix select_columns(const ComplexMatrix &m, std::span<const Index> idx)
{
    ComplexMatrix out(m.rows(), static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
    {
        if (idx[k] < 0 || idx[k] >= m.cols())
            throw DimensionError("select_columns: index " + std::to_string(idx[k]) + " out of range [0, " +
                                 std::to_string(m.cols()) + ")");
        out.col(static_cast<Index>(k)) = m.col(idx[k]);
    }
    return out;
}

} // namespace hycov
