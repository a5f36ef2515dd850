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

// Certification of an MPS estimate against local tomography data.
//
// For an estimate |psi> (already blocked so that each site is one tomography
// unit), the parent Hamiltonian H = sum_j h_j is built from projectors h_j onto
// the kernels of its two-site reductions. Writing gamma_j for the largest
// cosine of a non-trivial principal angle between range(h_j) and
// range(h_{j+1}), one has
//
//   {h_j, h_{j+1}} >= -gamma_j (h_j + h_{j+1})   and so   H^2 >= (1 - 2 gamma) H,
//
// which bounds the gap above the ground state by 1 - 2 gamma. When the maps
// Gamma_j are injective the ground state is unique, and
//
//   tau = sum_j (Tr[h_j sigma_j] + epsilon_j) / gap,   F >= sqrt(1 - tau).

#include <optional>
#include <string>
#include <vector>

#include "mpscert/linalg.hpp"
#include "mpscert/mps.hpp"
#include "mpscert/tomography.hpp"

namespace mpscert {

struct Thresholds {
    double one_tol = 1e-8;          ///< eigenvalues of h_j h_{j+1} h_j above 1 - one_tol count as one
    double rank_tol = 1e-8;         ///< reduction eigenvalues at or below this are kernel
    double gamma_threshold = 1e-6;  ///< smallest admissible singular value of Gamma_j
};

struct GammaBond {
    int j = 0;
    RVector singular_values;  ///< descending, length min(d^2, D_left * D_right)
    double min_singular = 0.0;
};

struct GammaReport {
    std::vector<GammaBond> bonds;
    double min_singular = 0.0;  ///< over all bonds; 0 when some Gamma_j has a nontrivial kernel by dimension
    bool dimension_ok = false;  ///< max bond dimension < physical dimension
    bool invertible = false;
};

struct WitnessSet {
    int block_dim = 0;
    std::vector<CMatrix> projectors;  ///< h_j on sites (j, j+1), block_dim^2 square
    std::vector<int> ranks;
    /// Orthonormal basis of range(1 - h_j). Optional; computed on demand when empty.
    std::vector<CMatrix> supports;
};

struct GammaAngles {
    std::vector<double> gammas;  ///< one per consecutive pair (j, j+1)
    double gamma = 0.0;
};

enum class GapSource { analytic, numeric };

/// How certify obtains the gap of the parent Hamiltonian.
struct GapChoice {
    GapSource source = GapSource::analytic;
    double value = 0.0;       ///< numeric only
    std::string provenance;   ///< numeric only, recorded verbatim

    static GapChoice analytic() {
        return {};
    }
    static GapChoice numeric(double gap, std::string provenance = "user") {
        return {GapSource::numeric, gap, std::move(provenance)};
    }
};

struct WindowTerm {
    int j = 0;
    double trace_h_sigma = 0.0;
    double epsilon = 0.0;
};

enum class CertStatus { certified, failed };

struct Certificate {
    CertStatus status = CertStatus::failed;
    std::string reason;  ///< empty when certified
    std::vector<double> gammas;
    std::optional<double> gamma;
    std::optional<double> gap_bound;
    GapSource gap_source = GapSource::analytic;
    std::string gap_provenance;
    std::optional<double> tau;
    std::optional<double> fidelity_lower_bound;
    std::vector<WindowTerm> per_site;
    double min_singular = 0.0;

    bool certified() const {
        return status == CertStatus::certified;
    }
};

/// Singular values of each Gamma_j: X -> sum Tr[X A_j^s A_{j+1}^t] |s t>.
GammaReport gamma_report(const MpsState &psi, double threshold = Thresholds{}.gamma_threshold);

/// d^2 x (D_left D_right) matrix of Gamma_j; column index a + D_left * b for X_{ba}.
CMatrix gamma_map(const MpsState &psi, int j);

/// h_j = projector onto eigenvectors of the two-site reduction with eigenvalue
/// <= rank_tol. Throws IllConditioned("kernel") when an eigenvalue lies within
/// a factor 10 of rank_tol.
WitnessSet parent_projectors(const MpsState &psi, double rank_tol = Thresholds{}.rank_tol);

/// Same, from precomputed two-site reductions.
WitnessSet parent_projectors_from(const std::vector<CMatrix> &reductions, int block_dim, double rank_tol);

/// gamma_j = sqrt of the largest eigenvalue of h_j h_{j+1} h_j (on the common
/// three-site space) that is at most 1 - one_tol; 0 when there is none.
/// Throws IllConditioned("angle") for eigenvalues in (1 - 10 one_tol, 1 - one_tol).
/// For large local dimension the equivalent complement formulation is used:
/// the non-trivial principal angles between range(h_j (x) 1) and
/// range(1 (x) h_{j+1}) coincide with those between the orthogonal complements,
/// which are small.
GammaAngles gamma_angles(const WitnessSet &ws, double one_tol = Thresholds{}.one_tol);

/// Direct eigenvalue route; always forms the d^3-dimensional product.
GammaAngles gamma_angles_direct(const WitnessSet &ws, double one_tol = Thresholds{}.one_tol);

/// Complement route; works from the supports only.
GammaAngles gamma_angles_complement(const WitnessSet &ws, double one_tol = Thresholds{}.one_tol);

/// Full pipeline. psi is canonicalized first; it must have data.n_blocks sites
/// of dimension data.block_dim.
/// Dimension of the zero-energy space of sum_j h_j on n = projectors + 1
/// blocked sites, by intersecting the kernels one site at a time with an
/// isometric basis of the prefix space. Eigenvalues of the restricted
/// constraint at or below null_tol count as zero; values in (null_tol, 1e3 *
/// null_tol) throw IllConditioned("ground"). Returns -1 once the prefix space
/// exceeds `cap` dimensions (never expected when the ground state is unique).
int ground_space_dimension(const WitnessSet &ws, double null_tol = 1e-10, int cap = 4096);

Certificate certify(const MpsState &psi, const TomographyData &data, const GapChoice &gap = GapChoice::analytic(),
                    const Thresholds &thresholds = {});

const char *to_string(GapSource source);

}  // namespace mpscert
