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

// Simulated local tomography. Every dataset satisfies, window by window,
//
//   || rho_j - sigma_j ||_tr <= epsilon_j
//
// where rho_j is the true reduction on blocked sites (j, j+1): with certainty
// for exact and perturbed data, and with the recorded per-window confidence for
// sampled data.

#include <cstdint>
#include <optional>
#include <vector>

#include "mpscert/linalg.hpp"
#include "mpscert/mps.hpp"

namespace mpscert {

struct TomographyWindow {
    int j = 0;             ///< 0-based index of the first blocked site
    CMatrix sigma;         ///< density-matrix estimate, block_dim^2 square
    double epsilon = 0.0;  ///< trace-norm error radius
};

struct TomographyData {
    int n_blocks = 0;
    int block_dim = 0;
    std::optional<double> confidence;  ///< per-window confidence; absent means certain
    std::vector<TomographyWindow> windows;

    double total_error() const;
    /// Checks window coverage, shapes, and that each sigma is a state to 1e-9.
    void validate() const;
};

/// sigma_j = true reduction of the k-blocked state, epsilon_j = 0.
TomographyData exact_reductions(const MpsState &psi, int k);

/// Add a seeded random Hermitian perturbation of operator norm `level` to each
/// window, project back to a state, and grow epsilon_j by the realized trace
/// distance. level = 0 returns the input unchanged.
TomographyData perturb(const TomographyData &data, double level, std::uint64_t seed);

/// Finite-statistics tomography: every window of 2k qudits is measured in all
/// (d+1)^{2k} product settings built from d+1 mutually unbiased bases (d must
/// be prime), `shots` times per setting, and reconstructed by linear inversion
/// followed by projection onto states.
///
/// epsilon_j = c * S * t + ||rho_hat - sigma||_tr, where S is the number of
/// settings, c = ((2d-1)/(d+1))^{2k} bounds the trace norm of each inversion
/// operator, and t = sqrt(2/N * ln(S (2^K - 2) / delta)) is the L1 deviation of a
/// K-outcome multinomial that holds for all settings simultaneously with
/// probability 1 - delta (delta = 1 - confidence).
TomographyData sample_measurements(const MpsState &psi, int k, std::int64_t shots, double confidence,
                                   std::uint64_t seed);

/// Per-window random stream seed, independent of evaluation order.
std::uint64_t window_seed(std::uint64_t seed, int j);

/// The d+1 mutually unbiased bases for prime d; entry m has basis vectors as columns.
std::vector<CMatrix> mutually_unbiased_bases(int d);

}  // namespace mpscert
