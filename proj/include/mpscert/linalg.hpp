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

#pragma once

// Dense complex linear algebra used throughout the library. Every spectrum and
// every list of singular values is returned in descending order, so "the lowest
// m eigenvalues" is always a suffix of the returned vector.

#include <complex>

#include <Eigen/Dense>

namespace mpscert {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Relative tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermitianTol = 1e-10;

struct SvdResult {
    CMatrix u;  ///< orthonormal columns
    RVector s;  ///< nonnegative, descending
    CMatrix v;  ///< orthonormal columns; m = u * diag(s) * v^dagger
};

struct HermitianSpectrum {
    RVector eigenvalues;   ///< descending
    CMatrix eigenvectors;  ///< column i pairs with eigenvalues(i)
};

/// Thin singular value decomposition.
SvdResult svd(const CMatrix &m);

/// Singular values only, descending.
RVector singular_values(const CMatrix &m);

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// (h + h^dagger)/2 before factorizing; inputs further than kHermitianTol
/// (relative to their largest entry) from Hermitian are rejected.
HermitianSpectrum eigh(const CMatrix &h);

/// Eigenvalues only, descending. Same Hermiticity contract as eigh.
RVector eigvalsh(const CMatrix &h);

/// Sum of singular values of a square matrix.
double trace_norm(const CMatrix &m);

/// Clip negative eigenvalues to zero and renormalize to unit trace.
CMatrix project_psd_unit_trace(const CMatrix &m);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix &a, const CMatrix &b);

/// (m + m^dagger) / 2.
CMatrix hermitian_part(const CMatrix &m);

/// Largest |m_ij - conj(m_ji)|.
double hermitian_defect(const CMatrix &m);

bool all_finite(const CMatrix &m);

/// Projector onto the span of the given columns (assumed orthonormal).
CMatrix projector_onto(const CMatrix &orthonormal_columns);

}  // namespace mpscert
