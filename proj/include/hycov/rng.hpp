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

#ifndef HYCOV_RNG_HPP
#define HYCOV_RNG_HPP

#include "hycov/numerics.hpp"

#include <cstdint>
#include <random>

namespace hycov
{

using Rng = std::mt19937_64;

// Stream for trial `trial` of an experiment seeded with `seed`: the engine is keyed by
// seed XOR trial, passed through a splitmix64 finaliser so neighbouring trials decorrelate.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial)
{
    std::uint64_t z = (seed ^ trial) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return Rng(z);
}

// CN(0, variance): real and imaginary parts iid N(0, variance / 2).
inline cdouble complex_normal(Rng &rng, double variance = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

inline ComplexMatrix complex_normal_matrix(Rng &rng, Index rows, Index cols, double variance = 1.0)
{
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = complex_normal(rng, variance);
    return m;
}

// Haar-distributed unitary via QR of a Gaussian matrix with phase correction.
ComplexMatrix random_unitary(Index n, Rng &rng);

} // namespace hycov

#endif
