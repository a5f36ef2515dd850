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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpscert/errors.hpp"
#include "mpscert/io.hpp"
#include "mpscert/mps.hpp"
#include "mpscert/oracle.hpp"
#include "mpscert/reconstruct.hpp"
#include "mpscert/tomography.hpp"
#include "mpscert/version.hpp"
#include "mpscert/witness.hpp"

namespace py = pybind11;
using namespace mpscert;

namespace {

Thresholds make_thresholds(double one_tol, double rank_tol, double gamma_threshold) {
    Thresholds t;
    t.one_tol = one_tol;
    t.rank_tol = rank_tol;
    t.gamma_threshold = gamma_threshold;
    return t;
}

GapChoice make_gap(const std::string &gap, std::optional<double> value) {
    if (gap == "analytic") {
        if (value) {
            throw ConfigurationError("gap_value is only used with gap='numeric'");
        }
        return GapChoice::analytic();
    }
    if (gap == "numeric") {
        if (!value) {
            throw ConfigurationError("gap='numeric' needs gap_value");
        }
        return GapChoice::numeric(*value, "user");
    }
    throw ConfigurationError("gap must be 'analytic' or 'numeric'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heralded certification of matrix product state tomography";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());
    py::register_exception<NumericFailure>(m, "NumericFailure", base.ptr());
    py::register_exception<DegenerateInput>(m, "DegenerateInput", base.ptr());
    py::register_exception<ConfigurationError>(m, "ConfigurationError", base.ptr());
    py::register_exception<OracleCapExceeded>(m, "OracleCapExceeded", base.ptr());
    py::register_exception<IllConditioned>(m, "IllConditioned", base.ptr());
    py::register_exception<DegenerateSpectrum>(m, "DegenerateSpectrum", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<MpsState>(m, "MpsState")
        .def(py::init([](int d, std::vector<std::vector<CMatrix>> tensors) { return MpsState(d, std::move(tensors)); }),
             py::arg("d"), py::arg("tensors"))
        .def_property_readonly("n", &MpsState::n)
        .def_property_readonly("d", &MpsState::d)
        .def_property_readonly("bond_dims", &MpsState::bond_dims)
        .def_property_readonly("max_bond_dim", &MpsState::max_bond_dim)
        .def_property_readonly("tensors", &MpsState::tensors)
        .def_property_readonly("is_left_canonical",
                               [](const MpsState &psi) { return psi.canonical() == Canonical::left; })
        .def("to_json", [](const MpsState &psi) { return mps_to_json(psi).dump(); })
        .def_static("from_json", [](const std::string &s) { return mps_from_json(Json::parse(s)); })
        .def("__repr__", [](const MpsState &psi) {
            return "<MpsState n=" + std::to_string(psi.n()) + " d=" + std::to_string(psi.d()) +
                   " D=" + std::to_string(psi.max_bond_dim()) + ">";
        });

    m.def(
        "named_state",
        [](const std::string &name, int n, int d, double phi, std::uint64_t seed, int bond_dim) {
            if (name == "aklt" || name == "aklt_periodic") {
                d = 3;
            }
            return named_state(parse_state_name(name, phi, seed, bond_dim), n, d);
        },
        py::arg("name"), py::arg("n"), py::arg("d") = 2, py::arg("phi") = 0.0, py::arg("seed") = 0,
        py::arg("bond_dim") = 2);
    m.def("random_mps", &random_mps, py::arg("n"), py::arg("d"), py::arg("bond_dim"), py::arg("seed"));
    m.def("canonicalize", [](const MpsState &psi) { return canonicalize(psi); }, py::arg("psi"));
    m.def("block", &block, py::arg("psi"), py::arg("k"));
    m.def("reduction", &reduction, py::arg("psi"), py::arg("j"), py::arg("width"));
    m.def("expectation_product", &expectation_product, py::arg("psi"), py::arg("ops"));
    m.def(
        "to_dense", [](const MpsState &psi) { return CVector(to_dense(psi).amplitudes); }, py::arg("psi"));

    py::class_<TomographyData>(m, "TomographyData")
        .def_readonly("n_blocks", &TomographyData::n_blocks)
        .def_readonly("block_dim", &TomographyData::block_dim)
        .def_readonly("confidence", &TomographyData::confidence)
        .def_property_readonly("windows",
                               [](const TomographyData &d) {
                                   py::list out;
                                   for (const TomographyWindow &w : d.windows) {
                                       out.append(py::make_tuple(w.j, w.sigma, w.epsilon));
                                   }
                                   return out;
                               })
        .def("total_error", &TomographyData::total_error)
        .def("to_json", [](const TomographyData &d) { return tomography_to_json(d).dump(); })
        .def_static("from_json", [](const std::string &s) { return tomography_from_json(Json::parse(s)); });

    m.def("exact_reductions", &exact_reductions, py::arg("psi"), py::arg("k"));
    m.def("perturb", &perturb, py::arg("data"), py::arg("level"), py::arg("seed"));
    m.def("sample_measurements", &sample_measurements, py::arg("psi"), py::arg("k"), py::arg("shots"),
          py::arg("confidence"), py::arg("seed"));

    py::class_<Certificate>(m, "Certificate")
        .def_property_readonly("certified", &Certificate::certified)
        .def_readonly("reason", &Certificate::reason)
        .def_readonly("gamma", &Certificate::gamma)
        .def_readonly("gammas", &Certificate::gammas)
        .def_readonly("gap_bound", &Certificate::gap_bound)
        .def_readonly("gap_provenance", &Certificate::gap_provenance)
        .def_readonly("tau", &Certificate::tau)
        .def_readonly("fidelity_lower_bound", &Certificate::fidelity_lower_bound)
        .def_readonly("min_singular", &Certificate::min_singular)
        .def("to_json", [](const Certificate &c) { return certificate_to_json(c).dump(); });

    m.def(
        "certify",
        [](const MpsState &psi, const TomographyData &data, const std::string &gap, std::optional<double> gap_value,
           double one_tol, double rank_tol, double gamma_threshold) {
            return certify(psi, data, make_gap(gap, gap_value), make_thresholds(one_tol, rank_tol, gamma_threshold));
        },
        py::arg("psi"), py::arg("data"), py::arg("gap") = "analytic", py::arg("gap_value") = py::none(),
        py::arg("one_tol") = Thresholds{}.one_tol, py::arg("rank_tol") = Thresholds{}.rank_tol,
        py::arg("gamma_threshold") = Thresholds{}.gamma_threshold);
    m.def(
        "gamma",
        [](const MpsState &psi) { return gamma_angles(parent_projectors(canonicalize(psi))).gamma; },
        py::arg("psi"), "Largest non-unit principal-angle cosine of the parent projectors.");

    py::class_<ReconstructResult>(m, "ReconstructResult")
        .def_readonly("mps", &ReconstructResult::mps)
        .def_readonly("objectives", &ReconstructResult::objectives)
        .def_readonly("converged", &ReconstructResult::converged);

    m.def(
        "reconstruct",
        [](const TomographyData &data, const std::string &method, int bond_dim, int max_sweeps, double tol,
           std::uint64_t seed) {
            ReconstructOptions opts;
            if (method == "dmrg") {
                opts.method = ReconstructMethod::dmrg;
            } else if (method == "variational") {
                opts.method = ReconstructMethod::variational;
            } else {
                throw ConfigurationError("method must be 'dmrg' or 'variational'");
            }
            opts.bond_dim = bond_dim;
            opts.max_sweeps = max_sweeps;
            opts.convergence_tol = tol;
            opts.seed = seed;
            return reconstruct(data, opts);
        },
        py::arg("data"), py::arg("method") = "dmrg", py::arg("bond_dim") = 2, py::arg("max_sweeps") = 50,
        py::arg("tol") = 1e-10, py::arg("seed") = 0);

    m.def(
        "exact_fidelity", [](const MpsState &psi, const MpsState &truth) { return exact_fidelity(psi, to_dense(truth)); },
        py::arg("psi"), py::arg("truth"));
}
