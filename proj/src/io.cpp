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

#include "mpscert/io.hpp"

#include <fstream>
#include <iomanip>

#include "mpscert/errors.hpp"
#include "mpscert/version.hpp"

namespace mpscert {

namespace {

constexpr int kFormatVersion = 1;

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw IoError(what);
    }
}

void check_version(const Json &j, const char *kind) {
    require(j.is_object(), std::string(kind) + ": expected a JSON object");
    require(j.contains("version") && j["version"].is_number_integer() && j["version"].get<int>() == kFormatVersion,
            std::string(kind) + ": unsupported or missing format version");
}

template <typename T>
T field(const Json &j, const char *key, const char *kind) {
    require(j.contains(key), std::string(kind) + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw IoError(std::string(kind) + ": bad field '" + key + "': " + e.what());
    }
}

Json optional_number(const std::optional<double> &x) {
    return x ? Json(*x) : Json(nullptr);
}

}  // namespace

Json matrix_to_json(const CMatrix &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const Json &j) {
    require(j.is_array() && !j.empty() && j[0].is_array(), "matrix: expected a nonempty array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json &row = j[static_cast<std::size_t>(r)];
        require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, "matrix: ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Json &z = row[static_cast<std::size_t>(c)];
            require(z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number(),
                    "matrix: entries must be [re, im] pairs");
            m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    return m;
}

Json mps_to_json(const MpsState &psi) {
    Json tensors = Json::array();
    for (int j = 0; j < psi.n(); ++j) {
        Json site = Json::array();
        for (int s = 0; s < psi.d(); ++s) {
            site.push_back(matrix_to_json(psi.tensor(j, s)));
        }
        tensors.push_back(std::move(site));
    }
    return {{"version", kFormatVersion},
            {"n", psi.n()},
            {"d", psi.d()},
            {"bond_dims", psi.bond_dims()},
            {"tensors", std::move(tensors)}};
}

MpsState mps_from_json(const Json &j) {
    check_version(j, "mps");
    const int n = field<int>(j, "n", "mps");
    const int d = field<int>(j, "d", "mps");
    require(n >= 1 && d >= 1, "mps: n and d must be positive");
    const Json &tensors = j.contains("tensors") ? j["tensors"] : Json();
    require(tensors.is_array() && static_cast<int>(tensors.size()) == n, "mps: expected n site tensors");
    std::vector<std::vector<CMatrix>> sites;
    for (const Json &site : tensors) {
        require(site.is_array() && static_cast<int>(site.size()) == d, "mps: each site needs d matrices");
        std::vector<CMatrix> mats;
        for (const Json &m : site) {
            mats.push_back(matrix_from_json(m));
        }
        sites.push_back(std::move(mats));
    }
    MpsState psi(d, std::move(sites));
    if (j.contains("bond_dims")) {
        require(field<std::vector<int>>(j, "bond_dims", "mps") == psi.bond_dims(),
                "mps: bond_dims disagree with the tensor shapes");
    }
    return psi;
}

Json tomography_to_json(const TomographyData &data) {
    Json windows = Json::array();
    for (const TomographyWindow &w : data.windows) {
        windows.push_back({{"j", w.j + 1}, {"epsilon", w.epsilon}, {"sigma", matrix_to_json(w.sigma)}});
    }
    return {{"version", kFormatVersion},
            {"n_blocks", data.n_blocks},
            {"block_dim", data.block_dim},
            {"confidence", optional_number(data.confidence)},
            {"windows", std::move(windows)}};
}

TomographyData tomography_from_json(const Json &j) {
    check_version(j, "tomography");
    TomographyData data;
    data.n_blocks = field<int>(j, "n_blocks", "tomography");
    data.block_dim = field<int>(j, "block_dim", "tomography");
    if (j.contains("confidence") && !j["confidence"].is_null()) {
        data.confidence = field<double>(j, "confidence", "tomography");
    }
    require(j.contains("windows") && j["windows"].is_array(), "tomography: missing windows");
    for (const Json &w : j["windows"]) {
        require(w.is_object(), "tomography: each window must be an object");
        TomographyWindow win;
        win.j = field<int>(w, "j", "tomography window") - 1;
        win.epsilon = field<double>(w, "epsilon", "tomography window");
        require(w.contains("sigma"), "tomography window: missing sigma");
        win.sigma = matrix_from_json(w["sigma"]);
        data.windows.push_back(std::move(win));
    }
    data.validate();
    return data;
}

Json certificate_to_json(const Certificate &cert) {
    Json per_site = Json::array();
    for (const WindowTerm &t : cert.per_site) {
        per_site.push_back({{"j", t.j + 1}, {"trace_h_sigma", t.trace_h_sigma}, {"epsilon", t.epsilon}});
    }
    return {{"status", cert.certified() ? "certified" : "failed"},
            {"reason", cert.certified() ? Json(nullptr) : Json(cert.reason)},
            {"gamma", optional_number(cert.gamma)},
            {"gammas", cert.gammas},
            {"gap_bound", optional_number(cert.gap_bound)},
            {"gap_source", to_string(cert.gap_source)},
            {"gap_provenance", cert.gap_provenance.empty() ? Json(nullptr) : Json(cert.gap_provenance)},
            {"tau", optional_number(cert.tau)},
            {"fidelity_lower_bound", optional_number(cert.fidelity_lower_bound)},
            {"min_singular", cert.min_singular},
            {"per_site", std::move(per_site)}};
}

Json thresholds_to_json(const Thresholds &t) {
    return {{"one_tol", t.one_tol}, {"rank_tol", t.rank_tol}, {"gamma_threshold", t.gamma_threshold}};
}

Json run_meta(std::uint64_t seed, const Thresholds &thresholds) {
    return {{"seed", seed}, {"thresholds", thresholds_to_json(thresholds)}, {"version", kVersion}};
}

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw IoError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::string &path, const Json &j) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << std::setw(1) << j << '\n';
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

void write_convergence_csv(const std::string &path, const std::vector<double> &objectives) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << "sweep,objective\n" << std::setprecision(17);
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        out << i + 1 << ',' << objectives[i] << '\n';
    }
}

}  // namespace mpscert
