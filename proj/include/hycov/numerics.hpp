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

#ifndef HYCOV_NUMERICS_HPP
#define HYCOV_NUMERICS_HPP

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace hycov
{

using cdouble = std::complex<double>;
using Index = Eigen::Index;

// Dense complex matrix, column-major. Every matrix symbol in the library is one of these.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Throws DimensionError for empty matrices and ArgumentError for NaN/Inf entries.
void require_finite(const ComplexMatrix &m, const char *what);

// Hermitian matrix. The constructor symmetrises its input as (H + H^*) / 2 so that
// entry(i,j) == conj(entry(j,i)) holds exactly for the stored values.
class HermitianMatrix
{
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const ComplexMatrix &h);

    static HermitianMatrix zero(Index dim);

    Index dim() const { return m_.rows(); }
    const ComplexMatrix &matrix() const { return m_; }
    cdouble operator()(Index i, Index j) const { return m_(i, j); }

private:
    ComplexMatrix m_;
};

struct EigenDecomposition
{
    RealVector values;    // descending
    ComplexMatrix vectors; // column k belongs to values(k)
};

// (M^* M)^{-1} M^* via Cholesky of the Gram matrix. Requires full column rank.
ComplexMatrix pseudoinverse(const ComplexMatrix &m);

// Orthogonal projector onto range(B): B * pinv(B).
ComplexMatrix projector(const ComplexMatrix &b);

// (H)^{-1/2} for a positive definite H.
ComplexMatrix inv_sqrt_psd(const HermitianMatrix &h);

// Cyclic complex Jacobi eigensolver.
EigenDecomposition eig_hermitian(const HermitianMatrix &h);

// Columns of m listed in idx, in that order.
ComplexMatrix select_columns(const ComplexMatrix &m, std::span<const Index> idx);

} // namespace hycov

#endif
