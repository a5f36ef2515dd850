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

// Brute-force references: dense parent Hamiltonians, their spectra, and exact
// fidelities. Used by the tests and as the numeric gap provider.

#include <cstdint>
#include <string>

#include "mpscert/linalg.hpp"
#include "mpscert/mps.hpp"
#include "mpscert/witness.hpp"

namespace mpscert {

/// Largest dense operator dimension the oracle will diagonalize.
inline constexpr std::int64_t kDenseOperatorCap = 4096;

struct DenseOperator {
    int n_blocks = 0;
    int block_dim = 0;
    CMatrix matrix;
};

/// sum_j 1 (x) h_j (x) 1 with h_j on blocked sites (j, j+1).
DenseOperator dense_hamiltonian(const WitnessSet &ws, int n_blocks, std::int64_t cap = kDenseOperatorCap);

struct GapResult {
    double ground_energy = 0.0;
    double gap = 0.0;
    int ground_degeneracy = 0;
};

/// Full diagonalization. Throws DegenerateSpectrum when every eigenvalue is
/// within zero_tol of the smallest.
GapResult exact_gap(const DenseOperator &h, double zero_tol = 1e-9);

/// |<psi|phi>| with both normalized.
double exact_fidelity(const MpsState &psi, const DenseState &truth);

struct KrylovOptions {
    int max_iterations = 300;
    double residual_tol = 1e-10;
    std::uint64_t seed = 0;
    std::int64_t cap = std::int64_t{1} << 16;
};

struct KrylovGap {
    double ritz = 0.0;           ///< lowest Ritz value on the complement of the ground vector
    double residual = 0.0;       ///< its residual norm
    double gap = 0.0;            ///< ritz - residual, never above the Ritz value
    double ground_residual = 0.0;  ///< || H ground ||
    int iterations = 0;
    bool converged = false;
};

/// Lanczos with full reorthogonalization for the lowest eigenvalue of H on the
/// orthogonal complement of `ground`, applying each h_j in place without
/// forming H. Meant for chains just past the dense cap; `ground` must be a
/// zero-energy eigenvector.
KrylovGap krylov_gap(const WitnessSet &ws, int n_blocks, const CVector &ground, const KrylovOptions &options = {});

struct ParentGap {
    double gap = 0.0;
    std::string provenance;  ///< "exact-diagonalization" or "lanczos"
};

/// Gap of the parent Hamiltonian of `ground` (a dense vector over n_blocks
/// blocked sites): dense diagonalization within the cap, Lanczos beyond it.
ParentGap parent_gap(const WitnessSet &ws, int n_blocks, const CVector &ground);

}  // namespace mpscert
