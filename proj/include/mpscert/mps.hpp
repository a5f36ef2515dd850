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

// Matrix product states
//
//   |psi> = sum_{s_1..s_n} Tr[A_1^{s_1} A_2^{s_2} ... A_n^{s_n}] |s_1 ... s_n>
//
// Site j (0-based) holds d matrices of shape bond_dims[j] x bond_dims[j+1].
// bond_dims[0] == bond_dims[n] is required so the trace closes; open-boundary
// chains use 1 at both ends and the trace becomes a scalar product.
//
// Basis ordering everywhere: site 0 is the most significant digit, so the
// dense index of |s_0 s_1 ... s_{n-1}> is s_0 d^{n-1} + ... + s_{n-1}.

#include <cstdint>
#include <string>
#include <vector>

#include "mpscert/linalg.hpp"

namespace mpscert {

/// Default cap on dense expansions (number of amplitudes).
inline constexpr std::int64_t kDenseAmplitudeCap = std::int64_t{1} << 20;

enum class Canonical { none, left };

class MpsState {
  public:
    /// tensors[j][s] is A_j^s. Shapes are validated and bond_dims derived.
    MpsState(int d, std::vector<std::vector<CMatrix>> tensors, Canonical canonical = Canonical::none);

    int n() const {
        return static_cast<int>(tensors_.size());
    }
    int d() const {
        return d_;
    }
    const std::vector<int> &bond_dims() const {
        return bond_dims_;
    }
    int max_bond_dim() const;
    Canonical canonical() const {
        return canonical_;
    }
    bool open_boundary() const {
        return bond_dims_.front() == 1;
    }

    const std::vector<CMatrix> &site(int j) const {
        return tensors_.at(static_cast<std::size_t>(j));
    }
    const CMatrix &tensor(int j, int s) const {
        return site(j).at(static_cast<std::size_t>(s));
    }
    const std::vector<std::vector<CMatrix>> &tensors() const {
        return tensors_;
    }

    /// Largest deviation of sum_s A^s^dagger A^s from the identity, over all sites.
    double left_canonical_defect() const;

  private:
    int d_;
    std::vector<std::vector<CMatrix>> tensors_;
    std::vector<int> bond_dims_;
    Canonical canonical_;
};

/// Explicit amplitude vector. Used only as a brute-force reference.
struct DenseState {
    int n = 0;
    int d = 0;
    CVector amplitudes;
};

/// Rewrite a trace-closed chain (boundary bond b > 1) as an open chain with
/// boundary dimension 1. Bond dimensions grow by a factor b. Open chains are
/// returned unchanged.
MpsState to_open_boundary(const MpsState &psi);

/// Left-to-right SVD sweep. The result satisfies sum_s A_j^s^dagger A_j^s = 1
/// at every site, carries unit norm on the last site, and represents the same
/// state up to normalization. Numerically zero singular values are dropped.
MpsState canonicalize(const MpsState &psi);

/// Group k contiguous sites into one site of dimension d^k. k must divide n.
MpsState block(const MpsState &psi, int k);

/// Right environments R_j (j = 0..n) for an open chain: R_n = 1 and
/// R_j = sum_s A_j^s R_{j+1} A_j^s^dagger.
std::vector<CMatrix> right_environments(const MpsState &psi);

/// Reduced density matrix of sites [j, j + width). Requires left-canonical
/// input; the right environment is contracted explicitly from the right end.
CMatrix reduction(const MpsState &psi, int j, int width);

/// All reductions of the given width, j = 0..n-width, from one environment
/// sweep. Works for any gauge and normalization of an open chain.
std::vector<CMatrix> all_reductions(const MpsState &psi, int width);

/// <psi| O_0 (x) ... (x) O_{n-1} |psi> / <psi|psi>.
Complex expectation_product(const MpsState &psi, const std::vector<CMatrix> &ops);

/// <psi|psi> by transfer contraction.
double norm_squared(const MpsState &psi);

/// Literal evaluation of the trace formula; normalized.
DenseState to_dense(const MpsState &psi, std::int64_t cap = kDenseAmplitudeCap);

/// Named states.
struct StateSpec {
    enum class Kind { ghz, ghz_phase, w, cluster, aklt, aklt_periodic, product_zero, random };
    Kind kind = Kind::ghz;
    double phi = 0.0;          ///< ghz_phase
    std::uint64_t seed = 0;    ///< random
    int bond_dim = 1;          ///< random
};

/// Parse "ghz", "ghz_phase", "w", "cluster", "aklt", "aklt_periodic",
/// "product", "random". Parameters are filled from the remaining arguments.
StateSpec parse_state_name(const std::string &name, double phi = 0.0, std::uint64_t seed = 0,
                           int bond_dim = 1);

/// Standard constructions, left-canonicalized. aklt requires d = 3; the others
/// except random and product require d = 2.
MpsState named_state(const StateSpec &spec, int n, int d);

/// Independent complex Gaussian entries with open-boundary bond dimensions
/// min(D, d^j, d^(n-j)), then canonicalized.
MpsState random_mps(int n, int d, int bond_dim, std::uint64_t seed);

/// Pauli and spin helpers used by tests, demos and the CLI.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

}  // namespace mpscert
