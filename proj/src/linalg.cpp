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

#include "mpscert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpscert/errors.hpp"

namespace mpscert {

namespace {

std::string shape_of(const CMatrix &m) {
    std::ostringstream out;
    out << m.rows() << "x" << m.cols();
    return out.str();
}

void require_finite(const CMatrix &m, const char *op) {
    if (!all_finite(m)) {
        throw ContractViolation(std::string(op) + ": non-finite entry in " + shape_of(m) + " input");
    }
}

CMatrix checked_hermitian(const CMatrix &h, const char *op) {
    if (h.rows() != h.cols()) {
        throw ContractViolation(std::string(op) + ": expected a square matrix, got " + shape_of(h));
    }
    require_finite(h, op);
    double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (hermitian_defect(h) > kHermitianTol * scale) {
        throw ContractViolation(std::string(op) + ": input is not Hermitian within tolerance");
    }
    return hermitian_part(h);
}

// Eigen returns ascending eigenvalues; flip to the library's descending order.
template <typename Vec>
Vec reversed(const Vec &v) {
    return v.reverse().eval();
}

}  // namespace

SvdResult svd(const CMatrix &m) {
    require_finite(m, "svd");
    if (m.size() == 0) {
        return {CMatrix(m.rows(), 0), RVector(0), CMatrix(m.cols(), 0)};
    }
    Eigen::BDCSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw NumericFailure("svd did not converge for " + shape_of(m) + " input");
    }
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

RVector singular_values(const CMatrix &m) {
    require_finite(m, "singular_values");
    if (m.size() == 0) {
        return RVector(0);
    }
    Eigen::BDCSVD<CMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NumericFailure("svd did not converge for " + shape_of(m) + " input");
    }
    return solver.singularValues();
}

HermitianSpectrum eigh(const CMatrix &h) {
    CMatrix sym = checked_hermitian(h, "eigh");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericFailure("eigh did not converge for " + shape_of(h) + " input");
    }
    return {reversed(solver.eigenvalues()), solver.eigenvectors().rowwise().reverse().eval()};
}

RVector eigvalsh(const CMatrix &h) {
    CMatrix sym = checked_hermitian(h, "eigvalsh");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericFailure("eigh did not converge for " + shape_of(h) + " input");
    }
    return reversed(solver.eigenvalues());
}

double trace_norm(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw ContractViolation("trace_norm: expected a square matrix, got " + shape_of(m));
    }
    return singular_values(m).sum();
}

CMatrix project_psd_unit_trace(const CMatrix &m) {
    HermitianSpectrum spec = eigh(m);
    RVector clipped = spec.eigenvalues.cwiseMax(0.0);
    double total = clipped.sum();
    if (!(total > 0.0)) {
        throw DegenerateInput("project_psd_unit_trace: no positive eigenvalue to keep");
    }
    clipped /= total;
    CMatrix out = spec.eigenvectors * clipped.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
    return hermitian_part(out);
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix hermitian_part(const CMatrix &m) {
    return (0.5 * (m + m.adjoint())).eval();
}

double hermitian_defect(const CMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix &m) {
    return m.allFinite();
}

CMatrix projector_onto(const CMatrix &orthonormal_columns) {
    return orthonormal_columns * orthonormal_columns.adjoint();
}

}  // namespace mpscert
