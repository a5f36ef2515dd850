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

#include "mpscert/oracle.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "mpscert/errors.hpp"

namespace mpscert {

namespace {

std::int64_t checked_dim(int block_dim, int n_blocks, std::int64_t cap, const char *op) {
    std::int64_t dim = 1;
    for (int i = 0; i < n_blocks; ++i) {
        dim *= block_dim;
        if (dim > cap) {
            throw OracleCapExceeded(std::string(op) + ": dimension " + std::to_string(block_dim) + "^" +
                                    std::to_string(n_blocks) + " exceeds the cap " + std::to_string(cap));
        }
    }
    return dim;
}

void check_witness(const WitnessSet &ws, int n_blocks) {
    if (n_blocks < 2 || ws.projectors.size() != static_cast<std::size_t>(n_blocks - 1)) {
        throw ContractViolation("oracle: need one projector per neighboring pair of blocks");
    }
}

// Ascending eigenvalues; real matrices take the cheaper real solver.
RVector ascending_spectrum(const CMatrix &m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (m.imag().cwiseAbs().maxCoeff() <= 1e-15 * scale) {
        Eigen::MatrixXd re = 0.5 * (m.real() + m.real().transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(re, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw NumericFailure("exact_gap: eigensolver failed");
        }
        return solver.eigenvalues();
    }
    RVector desc = eigvalsh(m);
    return desc.reverse();
}

// out += sum_j h_j v, each h_j applied in place on sites (j, j+1).
void apply_hamiltonian(const WitnessSet &ws, int n_blocks, const CVector &v, CVector &out) {
    const Eigen::Index d = ws.block_dim;
    const Eigen::Index pair = d * d;
    const Eigen::Index total = v.size();
    out.setZero(total);
    for (int j = 0; j + 1 < n_blocks; ++j) {
        Eigen::Index right = 1;
        for (int i = j + 2; i < n_blocks; ++i) {
            right *= d;
        }
        const Eigen::Index chunk = pair * right;
        const CMatrix ht = ws.projectors[static_cast<std::size_t>(j)].transpose();
        for (Eigen::Index start = 0; start < total; start += chunk) {
            Eigen::Map<const CMatrix> in(v.data() + start, right, pair);
            Eigen::Map<CMatrix> acc(out.data() + start, right, pair);
            acc.noalias() += in * ht;
        }
    }
}

}  // namespace

DenseOperator dense_hamiltonian(const WitnessSet &ws, int n_blocks, std::int64_t cap) {
    check_witness(ws, n_blocks);
    const std::int64_t dim = checked_dim(ws.block_dim, n_blocks, cap, "dense_hamiltonian");
    DenseOperator op;
    op.n_blocks = n_blocks;
    op.block_dim = ws.block_dim;
    op.matrix = CMatrix::Zero(dim, dim);
    Eigen::Index left = 1;
    for (int j = 0; j + 1 < n_blocks; ++j) {
        const Eigen::Index right = dim / (left * ws.block_dim * ws.block_dim);
        op.matrix += kron(CMatrix::Identity(left, left),
                          kron(ws.projectors[static_cast<std::size_t>(j)], CMatrix::Identity(right, right)));
        left *= ws.block_dim;
    }
    return op;
}

GapResult exact_gap(const DenseOperator &h, double zero_tol) {
    if (h.matrix.rows() != h.matrix.cols() || h.matrix.rows() == 0) {
        throw ContractViolation("exact_gap: operator must be square and nonempty");
    }
    if (h.matrix.rows() > kDenseOperatorCap) {
        throw OracleCapExceeded("exact_gap: dimension " + std::to_string(h.matrix.rows()) + " exceeds the cap");
    }
    if (hermitian_defect(h.matrix) > kHermitianTol * std::max(1.0, h.matrix.cwiseAbs().maxCoeff())) {
        throw ContractViolation("exact_gap: operator is not Hermitian");
    }
    const RVector ev = ascending_spectrum(h.matrix);
    GapResult out;
    out.ground_energy = ev(0);
    Eigen::Index i = 0;
    while (i < ev.size() && ev(i) <= out.ground_energy + zero_tol) {
        ++i;
    }
    if (i == ev.size()) {
        throw DegenerateSpectrum("exact_gap: every eigenvalue equals the ground energy");
    }
    out.ground_degeneracy = static_cast<int>(i);
    out.gap = ev(i) - out.ground_energy;
    return out;
}

double exact_fidelity(const MpsState &psi, const DenseState &truth) {
    if (psi.n() != truth.n || psi.d() != truth.d) {
        throw ContractViolation("exact_fidelity: state shapes differ");
    }
    const DenseState mine = to_dense(psi);
    const double norm = truth.amplitudes.norm();
    if (!(norm > 0.0)) {
        throw DegenerateInput("exact_fidelity: reference state is zero");
    }
    return std::min(1.0, std::abs(mine.amplitudes.dot(truth.amplitudes)) / norm);
}

KrylovGap krylov_gap(const WitnessSet &ws, int n_blocks, const CVector &ground, const KrylovOptions &options) {
    check_witness(ws, n_blocks);
    const std::int64_t dim = checked_dim(ws.block_dim, n_blocks, options.cap, "krylov_gap");
    if (ground.size() != dim || !(ground.norm() > 0.0)) {
        throw ContractViolation("krylov_gap: ground vector has the wrong size or is zero");
    }
    const CVector psi = ground / ground.norm();
    KrylovGap out;
    CVector w(dim);
    apply_hamiltonian(ws, n_blocks, psi, w);
    out.ground_residual = w.norm();

    const auto deflate = [&psi](CVector &x, const std::vector<CVector> &basis) {
        for (int pass = 0; pass < 2; ++pass) {
            x -= psi.dot(x) * psi;
            for (const CVector &b : basis) {
                x -= b.dot(x) * b;
            }
        }
    };

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = Complex(re, im);
    }
    deflate(v, {});
    v /= v.norm();

    const int max_it = static_cast<int>(std::min<std::int64_t>(options.max_iterations, dim - 1));
    std::vector<CVector> basis;
    std::vector<double> alpha, beta;
    for (int it = 0; it < max_it; ++it) {
        basis.push_back(v);
        apply_hamiltonian(ws, n_blocks, v, w);
        alpha.push_back(v.dot(w).real());
        deflate(w, basis);
        const double b = w.norm();
        beta.push_back(b);

        const int m = static_cast<int>(alpha.size());
        const bool last = it + 1 == max_it || b < 1e-13;
        if (m % 5 != 0 && !last) {
            v = w / b;
            continue;
        }
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) {
                t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
        out.ritz = solver.eigenvalues()(0);
        out.residual = b * std::abs(solver.eigenvectors()(m - 1, 0));
        out.iterations = m;
        if (out.residual < options.residual_tol || b < 1e-13) {
            out.converged = true;
            break;
        }
        v = w / b;
    }
    out.gap = out.ritz - out.residual;
    return out;
}

ParentGap parent_gap(const WitnessSet &ws, int n_blocks, const CVector &ground) {
    check_witness(ws, n_blocks);
    std::int64_t dim = 1;
    for (int i = 0; i < n_blocks && dim <= kDenseOperatorCap; ++i) {
        dim *= ws.block_dim;
    }
    if (dim <= kDenseOperatorCap) {
        return {exact_gap(dense_hamiltonian(ws, n_blocks)).gap, "exact-diagonalization"};
    }
    const KrylovGap k = krylov_gap(ws, n_blocks, ground);
    if (!k.converged) {
        throw NumericFailure("parent_gap: Lanczos did not converge");
    }
    return {k.gap, "lanczos"};
}

}  // namespace mpscert
