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

#ifndef HYCOV_ERRORS_HPP
#define HYCOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hycov
{

// Invalid scenario, schedule or experiment configuration.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Operand shapes do not fit together.
class DimensionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Caller passed an inconsistent argument (e.g. S_o not contained in S).
class ArgumentError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A selected column block is (numerically) rank deficient.
class SingularityError : public std::runtime_error
{
public:
    SingularityError(const std::string &what, long support_size)
        : std::runtime_error(what), support_size_(support_size) {}
    long support_size() const noexcept { return support_size_; }

private:
    long support_size_;
};

// A matrix that must be positive definite is not.
class DefinitenessError : public std::runtime_error
{
public:
    DefinitenessError(const std::string &what, double smallest_eigenvalue)
        : std::runtime_error(what), smallest_(smallest_eigenvalue) {}
    double smallest_eigenvalue() const noexcept { return smallest_; }

private:
    double smallest_;
};

// Iterative kernel exhausted its iteration budget.
class ConvergenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace hycov

#endif
