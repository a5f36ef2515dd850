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

#include <iosfwd>
#include <string>
#include <vector>

#include "mpscert/mps.hpp"
#include "mpscert/tomography.hpp"
#include "mpscert/witness.hpp"

namespace mpscert::cli {

/// Exit codes. Stable across versions.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitHeraldedFailure = 2;

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Certify with the gap of the estimate's own parent Hamiltonian, computed by
/// the oracle (dense diagonalization or Lanczos). Falls back to the analytic
/// pipeline's failure when the estimate cannot be certified at all.
Certificate certify_with_oracle_gap(const MpsState &estimate, const TomographyData &data,
                                    const Thresholds &thresholds);

struct DemoRow {
    double noise = 0.0;
    double total_error = 0.0;
    bool certified = false;
    double fidelity_lower_bound = 0.0;
    double fidelity_density_bound = 0.0;
    double oracle_fidelity = 0.0;
    double oracle_fidelity_density = 0.0;
    double gamma = 0.0;
    double gap = 0.0;
};

/// AKLT curve: for each noise level, perturb the exact reductions, reconstruct
/// with DMRG at D = 2, certify with the oracle gap, and compare with the truth.
std::vector<DemoRow> demo_aklt(int n, int k, const std::vector<double> &noise_grid, std::uint64_t seed);

}  // namespace mpscert::cli
