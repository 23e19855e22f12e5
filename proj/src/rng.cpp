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

#include "hycov/rng.hpp"

#include <Eigen/QR>

namespace hycov
{

ComplexMatrix random_unitary(Index n, Rng &rng)
{
    const Eigen::HouseholderQR<ComplexMatrix> qr(complex_normal_matrix(rng, n, n));
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
    {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0)
            q.col(j) *= r(j, j) / mag;
    }
    return q;
}

} // namespace hycov
