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

#include "hycov/errors.hpp"
#include "hycov/numerics.hpp"
#include "hycov/rng.hpp"
#include "hycov/tolerances.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>

using namespace hycov;

namespace
{

ComplexMatrix identity(Index n)
{
    return ComplexMatrix::Identity(n, n);
}

} // namespace

TEST_CASE("pseudoinverse of small closed-form inputs", "[numerics][pinv]")
{
    CHECK((pseudoinverse(identity(3)) - identity(3)).norm() < 1e-14);

    ComplexMatrix v(2, 1);
    v << 3.0, 4.0;
    const ComplexMatrix p = pseudoinverse(v);
    REQUIRE(p.rows() == 1);
    REQUIRE(p.cols() == 2);
    CHECK(std::abs(p(0, 0) - cdouble(3.0 / 25.0)) < 1e-15);
    CHECK(std::abs(p(0, 1) - cdouble(4.0 / 25.0)) < 1e-15);
}

TEST_CASE("pseudoinverse left-inverts random full-rank matrices", "[numerics][pinv]")
{
    Rng rng(101);
    for (int rep = 0; rep < 20; ++rep)
    {
        const ComplexMatrix m = complex_normal_matrix(rng, 8, 3);
        const ComplexMatrix p = pseudoinverse(m);
        CHECK((p * m - identity(3)).norm() <= tol::pinv_identity);

        // independent oracle: complete orthogonal decomposition
        const ComplexMatrix ref = Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(m).pseudoInverse();
        CHECK((p - ref).norm() <= 1e-10 * ref.norm());
    }
}

TEST_CASE("pseudoinverse rejects rank-deficient blocks", "[numerics][pinv]")
{
    Rng rng(102);
    ComplexMatrix m = complex_normal_matrix(rng, 6, 3);
    m.col(2) = 2.0 * m.col(0) - m.col(1);
    try
    {
        (void)pseudoinverse(m);
        FAIL("expected SingularityError");
    }
    catch (const SingularityError &e)
    {
        CHECK(e.support_size() == 3);
        CHECK(std::string(e.what()).find("support size 3") != std::string::npos);
    }

    CHECK_THROWS_AS(pseudoinverse(complex_normal_matrix(rng, 2, 3)), SingularityError);
}

TEST_CASE("projector examples and properties", "[numerics][projector]")
{
    ComplexMatrix e1 = ComplexMatrix::Zero(4, 1);
    e1(0, 0) = 1.0;
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(0, 0) = 1.0;
    CHECK((projector(e1) - expect).norm() < 1e-15);

    Rng rng(103);
    const ComplexMatrix sq = complex_normal_matrix(rng, 5, 5);
    CHECK((projector(sq) - identity(5)).norm() < 1e-10);

    for (int rep = 0; rep < 20; ++rep)
    {
        const ComplexMatrix b = complex_normal_matrix(rng, 8, 2);
        const ComplexMatrix P = projector(b);
        CHECK((P * P - P).norm() <= tol::projector);
        CHECK((P - P.adjoint()).norm() <= tol::projector);
        CHECK(((identity(8) - P) * b).norm() <= tol::projector);
    }
}

TEST_CASE("inverse square root of positive definite matrices", "[numerics][inv_sqrt]")
{
    CHECK((inv_sqrt_psd(HermitianMatrix(4.0 * identity(2))) - 0.5 * identity(2)).norm() < 1e-14);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 9.0;
    ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
    expect(0, 0) = 1.0;
    expect(1, 1) = 1.0 / 3.0;
    CHECK((inv_sqrt_psd(HermitianMatrix(d)) - expect).norm() < 1e-14);

    Rng rng(104);
    for (int rep = 0; rep < 20; ++rep)
    {
        const ComplexMatrix b = complex_normal_matrix(rng, 4, 8);
        const HermitianMatrix h(b * b.adjoint());
        const ComplexMatrix s = inv_sqrt_psd(h);
        CHECK((s * h.matrix() * s - identity(4)).norm() <= tol::inv_sqrt);
        CHECK((s - s.adjoint()).norm() <= 1e-12 * s.norm());
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("inverse square root reports the offending eigenvalue", "[numerics][inv_sqrt]")
{
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = 2.0;
    h(1, 1) = 1.0;
    h(2, 2) = -0.5;
    try
    {
        (void)inv_sqrt_psd(HermitianMatrix(h));
        FAIL("expected DefinitenessError");
    }
    catch (const DefinitenessError &e)
    {
        CHECK(std::abs(e.smallest_eigenvalue() + 0.5) < 1e-12);
    }
}

TEST_CASE("Hermitian eigensolver on diagonal and identity inputs", "[numerics][eig]")
{
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    const EigenDecomposition e = eig_hermitian(HermitianMatrix(d));
    CHECK(e.values(0) == Catch::Approx(3.0));
    CHECK(e.values(1) == Catch::Approx(2.0));
    CHECK(e.values(2) == Catch::Approx(1.0));
    // columns are e_0, e_2, e_1 up to a unit phase
    CHECK(std::abs(e.vectors(0, 0)) == Catch::Approx(1.0));
    CHECK(std::abs(e.vectors(2, 1)) == Catch::Approx(1.0));
    CHECK(std::abs(e.vectors(1, 2)) == Catch::Approx(1.0));

    const EigenDecomposition i5 = eig_hermitian(HermitianMatrix(identity(5)));
    for (Index k = 0; k < 5; ++k)
        CHECK(i5.values(k) == Catch::Approx(1.0));
}

TEST_CASE("Hermitian eigensolver matches the 2x2 characteristic polynomial", "[numerics][eig]")
{
    Rng rng(105);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 50; ++rep)
    {
        const double a = u(rng), c = u(rng);
        const cdouble b(u(rng), u(rng));
        ComplexMatrix h(2, 2);
        h << a, b, std::conj(b), c;
        // lambda^2 - (a + c) lambda + (a c - |b|^2) = 0
        const double mid = 0.5 * (a + c);
        const double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
        const EigenDecomposition e = eig_hermitian(HermitianMatrix(h));
        CHECK(std::abs(e.values(0) - (mid + rad)) < 1e-12);
        CHECK(std::abs(e.values(1) - (mid - rad)) < 1e-12);
    }
}

TEST_CASE("Hermitian eigensolver reconstructs random matrices", "[numerics][eig]")
{
    Rng rng(106);
    for (Index n : {1, 4, 17, 64})
    {
        const ComplexMatrix b = complex_normal_matrix(rng, n, n);
        const HermitianMatrix h(b + b.adjoint());
        const EigenDecomposition e = eig_hermitian(h);
        const double scale = h.matrix().norm();

        for (Index k = 1; k < n; ++k)
            CHECK(e.values(k - 1) >= e.values(k));
        CHECK((e.vectors.adjoint() * e.vectors - identity(n)).norm() <= tol::eig_orthonormal);
        for (Index k = 0; k < n; ++k)
            CHECK((h.matrix() * e.vectors.col(k) - e.values(k) * e.vectors.col(k)).norm() <= tol::eig_residual * scale);
        const ComplexMatrix r = e.vectors * e.values.cast<cdouble>().asDiagonal() * e.vectors.adjoint();
        CHECK((r - h.matrix()).norm() <= tol::eig_residual * scale);

        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(h.matrix());
        const RealVector ref_desc = ref.eigenvalues().reverse();
        CHECK((e.values - ref_desc).norm() <= 1e-10 * scale);
    }
}

TEST_CASE("HermitianMatrix symmetrizes and rejects non-finite input", "[numerics]")
{
    ComplexMatrix m(2, 2);
    m << 1.0, cdouble(2.0, 1.0), cdouble(0.0, 0.0), 3.0;
    const HermitianMatrix h(m);
    CHECK(h(0, 1) == std::conj(h(1, 0)));
    CHECK(h(0, 1) == cdouble(1.0, 0.5));

    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(HermitianMatrix(m), ArgumentError);
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("select_columns keeps the requested order", "[numerics]")
{
    Rng rng(107);
    const ComplexMatrix m = complex_normal_matrix(rng, 3, 5);
    const std::vector<Index> idx{4, 0, 2};
    const ComplexMatrix s = select_columns(m, idx);
    CHECK(s.col(0) == m.col(4));
    CHECK(s.col(1) == m.col(0));
    CHECK(s.col(2) == m.col(2));
    const std::vector<Index> bad{5};
    CHECK_THROWS_AS(select_columns(m, bad), DimensionError);
}

TEST_CASE("random unitary is unitary", "[numerics][rng]")
{
    Rng rng(108);
    const ComplexMatrix u = random_unitary(8, rng);
    CHECK((u.adjoint() * u - identity(8)).norm() < 1e-12);
}
