// Copyright 2026 The mpscert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "../support/dense_oracles.hpp"
#include "mpscert/errors.hpp"
#include "mpscert/linalg.hpp"

using namespace mpscert;

namespace {

CMatrix diag(std::initializer_list<double> v) {
    RVector r(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) {
        r(i++) = x;
    }
    return r.cast<Complex>().asDiagonal();
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("svd of the zero matrix and a nilpotent matrix") {
    CHECK(svd(CMatrix::Zero(2, 2)).s.cwiseAbs().maxCoeff() == 0.0);

    CMatrix m(2, 2);
    m << 0, 1, 0, 0;
    const RVector s = svd(m).s;
    CHECK(s(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(s(1)) < 1e-14);
}

TEST_CASE("svd reconstructs random matrices with orthonormal factors") {
    std::mt19937_64 rng(11);
    for (auto [r, c] : {std::pair{4, 4}, std::pair{6, 3}, std::pair{3, 7}}) {
        const CMatrix m = oracle::random_matrix(rng, r, c);
        const SvdResult f = svd(m);
        const CMatrix back = f.u * f.s.cast<Complex>().asDiagonal() * f.v.adjoint();
        CHECK((back - m).norm() <= 1e-10 * m.norm());
        const Eigen::Index k = f.s.size();
        CHECK((f.u.adjoint() * f.u - CMatrix::Identity(k, k)).norm() < 1e-12);
        CHECK((f.v.adjoint() * f.v - CMatrix::Identity(k, k)).norm() < 1e-12);
        for (Eigen::Index i = 1; i < k; ++i) {
            CHECK(f.s(i - 1) >= f.s(i));
        }
    }
}

TEST_CASE("eigh returns descending spectra") {
    const RVector z = eigvalsh(diag({1, -1}));
    CHECK(z(0) == doctest::Approx(1.0));
    CHECK(z(1) == doctest::Approx(-1.0));
    const RVector id = eigvalsh(CMatrix::Identity(3, 3));
    CHECK((id - RVector::Ones(3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("eigh diagonalizes random Hermitian matrices") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix h = oracle::random_hermitian(rng, 7);
        const HermitianSpectrum spec = eigh(h);
        const CMatrix back =
            spec.eigenvectors * spec.eigenvalues.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
        CHECK((back - h).norm() < 1e-10 * h.norm());
        for (Eigen::Index i = 1; i < spec.eigenvalues.size(); ++i) {
            CHECK(spec.eigenvalues(i - 1) >= spec.eigenvalues(i));
        }
    }
}

TEST_CASE("eigh rejects non-Hermitian and malformed input") {
    CMatrix m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(eigh(m), ContractViolation);
    CHECK_THROWS_AS(eigh(CMatrix::Zero(2, 3)), ContractViolation);
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(eigvalsh(bad), ContractViolation);
}

TEST_CASE("trace norm") {
    CHECK(trace_norm(diag({1, -1})) == doctest::Approx(2.0));
    CMatrix zero_one(2, 2);
    zero_one << 1, 0, 0, -1;
    CHECK(trace_norm(zero_one) == doctest::Approx(2.0));
    std::mt19937_64 rng(2);
    const CMatrix rho = oracle::random_state(rng, 4);
    CHECK(trace_norm(0.5 * (rho - rho)) == 0.0);
    CHECK_THROWS_AS(trace_norm(CMatrix::Zero(2, 3)), ContractViolation);
}

TEST_CASE("trace norm is a norm on random samples") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix a = oracle::random_hermitian(rng, 5);
        const CMatrix b = oracle::random_hermitian(rng, 5);
        CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-12);
        CHECK(trace_norm(-2.0 * a) == doctest::Approx(2.0 * trace_norm(a)));
        // For Hermitian matrices the trace norm is the sum of |eigenvalues|.
        CHECK(trace_norm(a) == doctest::Approx(eigvalsh(a).cwiseAbs().sum()));
    }
}

TEST_CASE("projection onto states clips and renormalizes") {
    CHECK((project_psd_unit_trace(diag({0.5, 0.5})) - diag({0.5, 0.5})).norm() < 1e-14);
    CHECK((project_psd_unit_trace(diag({0.6, 0.6, -0.2})) - diag({0.5, 0.5, 0.0})).norm() < 1e-14);
    CHECK((project_psd_unit_trace(diag({2, 0})) - diag({1, 0})).norm() < 1e-14);
    CHECK_THROWS_AS(project_psd_unit_trace(diag({-1, -2})), DegenerateInput);
}

TEST_CASE("projection output is a state and fixes states") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix h = oracle::random_hermitian(rng, 6) + 0.5 * CMatrix::Identity(6, 6);
        const CMatrix p = project_psd_unit_trace(h);
        CHECK(std::abs(p.trace() - Complex(1.0)) < 1e-12);
        CHECK(eigvalsh(p).minCoeff() > -1e-12);
        CHECK((project_psd_unit_trace(p) - p).norm() < 1e-10);
    }
}

TEST_CASE("kron follows the first-factor-major convention") {
    CMatrix a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, 1, 0;
    const CMatrix k = kron(a, b);
    CHECK(k(0, 1) == Complex(1.0));
    CHECK(k(1, 0) == Complex(1.0));
    CHECK(k(2, 3) == Complex(4.0));
    CHECK(k(0, 3) == Complex(2.0));
}

}  // TEST_SUITE
