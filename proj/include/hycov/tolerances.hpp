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

#ifndef HYCOV_TOLERANCES_HPP
#define HYCOV_TOLERANCES_HPP

namespace hycov::tol
{

// Library-wide numeric thresholds. Tests import these instead of restating literals.

inline constexpr double pinv_condition = 1e12;      // Gram-matrix condition estimate that counts as singular
inline constexpr double pinv_identity = 1e-10;      // pinv(M) * M == I
inline constexpr double projector = 1e-10;          // P^2 == P, P == P^*, P B == B
inline constexpr double inv_sqrt = 1e-9;            // S H S == I
inline constexpr double pd_relative = 1e-12;        // lambda_min > pd_relative * lambda_max
inline constexpr double eig_orthonormal = 1e-9;     // V^* V == I
inline constexpr double eig_residual = 1e-8;        // ||H v - lambda v|| <= eig_residual * ||H||
inline constexpr int jacobi_max_sweeps = 100;       // cyclic sweeps before ConvergenceError
inline constexpr double tight_frame = 1e-8;         // Phi Phi^* == D I, W W^* == I
inline constexpr double dictionary_frame = 1e-9;    // A A^* == D I
inline constexpr double gram_schmidt_floor = 1e-10; // relative norm left after orthogonalisation
inline constexpr double psd_floor = -1e-9;          // smallest admissible eigenvalue of a PSD estimate
inline constexpr double eta_ceiling = 1e-9;         // eta <= 1 + eta_ceiling
inline constexpr double stream_rank = 1e-9;         // relative eigenvalue counted as a usable stream

} // namespace hycov::tol

#endif
