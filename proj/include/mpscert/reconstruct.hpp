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

// MPS estimates from tomography data.
//
// Both methods sweep single-site updates over a chain whose bond dimensions
// are fixed at min(D, d^j, d^(n-j)):
//
//   dmrg         ground state of the empirical parent Hamiltonian built from
//                the data (projectors onto the low-weight eigenvectors of each sigma_j)
//   variational  minimize sum_j || rho_j(psi) - sigma_j ||_tr, accepting only
//                steps that do not increase it

#include <cstdint>
#include <optional>
#include <vector>

#include "mpscert/linalg.hpp"
#include "mpscert/mps.hpp"
#include "mpscert/tomography.hpp"
#include "mpscert/witness.hpp"

namespace mpscert {

enum class ReconstructMethod { dmrg, variational };

struct ReconstructOptions {
    int bond_dim = 2;
    int max_sweeps = 50;
    double convergence_tol = 1e-10;  ///< stop once a sweep lowers the objective by less than this
    std::uint64_t seed = 0;
    ReconstructMethod method = ReconstructMethod::dmrg;

    void validate() const;
};

struct ReconstructResult {
    MpsState mps;                   ///< left-canonical
    std::vector<double> objectives;  ///< one entry per sweep
    bool converged = false;
};

/// Empirical parent Hamiltonian of the data for bond dimension D.
///
/// On window j the kernel holds the d_b^2 - D_l D_r lowest eigenvectors of
/// sigma_j, where D_l, D_r are the open-chain bond dimensions
/// min(D, d_b^m, d_b^(n_b - m)) at the window edges. In the bulk this is
/// d_b^2 - D^2. Eigenvalues at or below null_tol are always put in the kernel.
/// Throws IllConditioned("cut") when two eigenvalues straddling the cut differ
/// by less than 1e-12 and are not both null.
WitnessSet empirical_parent(const TomographyData &data, int bond_dim, double null_tol = 1e-10);

/// Single-site DMRG for sum_j h_j, sweeping left-right-left from a seeded
/// random state. The objective is <psi|H|psi> after each sweep.
ReconstructResult dmrg_ground(const WitnessSet &ws, const ReconstructOptions &options);

/// Trace-norm fit. Each site update first tries the lowest eigenvector of the
/// linearized objective sum_j Tr[S_j rho_j] with S_j = sign(rho_j - sigma_j),
/// then a backtracking subgradient step; a candidate is kept only if the true
/// objective does not increase. Starts from `initial` when given, otherwise from
/// a seeded random state.
ReconstructResult variational_fit(const TomographyData &data, const ReconstructOptions &options,
                                  const std::optional<MpsState> &initial = std::nullopt);

/// sum_j || rho_j(psi) - sigma_j ||_tr.
double trace_distance_objective(const MpsState &psi, const TomographyData &data);

/// Dispatch on options.method; dmrg goes through empirical_parent.
ReconstructResult reconstruct(const TomographyData &data, const ReconstructOptions &options);

namespace detail {

using Sites = std::vector<std::vector<CMatrix>>;

/// Same state with sites left of `center` left-canonical and sites right of
/// it right-canonical (sum_s B^s B^s^dagger = 1). The center carries the norm.
Sites mixed_canonical(const Sites &sites, int center);

/// Matrix of x -> (sum_j O_j) restricted to the center tensor, for a chain in
/// mixed canonical form: <psi| sum_j O_j |psi> = x^dagger H x with
/// x[(a d + s) D_r + b] = A_center^s[a, b]. ops[j] acts on sites (j, j+1).
CMatrix effective_operator(const Sites &sites, int center, const std::vector<CMatrix> &ops);

}  // namespace detail

}  // namespace mpscert
