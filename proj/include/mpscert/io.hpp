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

// JSON and CSV file formats.
//
// Complex numbers are [re, im] pairs and matrices are row-major nested arrays.
// Window indices in files are 1-based; in memory they are 0-based. Every
// writer accepts a "meta" object (seed, thresholds, tool version) which is
// stored verbatim and ignored by the readers.

#include <string>
#include <vector>

#include <json.hpp>

#include "mpscert/mps.hpp"
#include "mpscert/tomography.hpp"
#include "mpscert/witness.hpp"

namespace mpscert {

using Json = nlohmann::json;

Json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const Json &j);

Json mps_to_json(const MpsState &psi);
MpsState mps_from_json(const Json &j);

Json tomography_to_json(const TomographyData &data);
TomographyData tomography_from_json(const Json &j);

/// Unavailable fields (failed certificates) are written as null.
Json certificate_to_json(const Certificate &cert);

Json thresholds_to_json(const Thresholds &t);

/// {seed, thresholds, version}.
Json run_meta(std::uint64_t seed, const Thresholds &thresholds);

Json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const Json &j);

/// Two columns: sweep (1-based), objective.
void write_convergence_csv(const std::string &path, const std::vector<double> &objectives);

}  // namespace mpscert
