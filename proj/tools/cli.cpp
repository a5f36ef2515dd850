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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "mpscert/errors.hpp"
#include "mpscert/io.hpp"
#include "mpscert/oracle.hpp"
#include "mpscert/reconstruct.hpp"
#include "mpscert/version.hpp"

namespace mpscert::cli {

namespace {

struct SimulateArgs {
    std::string state;
    std::string mps_path;
    int n = 0;
    int d = 2;
    int k = 1;
    double noise = 0.0;
    std::int64_t shots = 0;
    double confidence = 0.95;
    std::uint64_t seed = 0;
    double phi = 0.0;
    int bond_dim = 2;
    std::string out;
    std::string save_state;
};

struct ReconstructArgs {
    std::string data;
    std::string method = "dmrg";
    int bond_dim = 2;
    int max_sweeps = 50;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    std::string out;
    std::string log;
};

struct CertifyArgs {
    std::string mps;
    std::string data;
    int k = 1;
    std::string gap = "analytic";
    std::optional<double> gap_value;
    Thresholds thresholds;
    std::string out;
};

struct DemoArgs {
    int n = 8;
    int k = 1;
    std::vector<double> noise_grid{0.0, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
    std::uint64_t seed = 1;
    std::string out;
};

int physical_dim_for(const std::string &state, int requested) {
    return state == "aklt" || state == "aklt_periodic" ? 3 : requested;
}

MpsState load_or_build(const std::string &state, const std::string &mps_path, int n, int d, double phi,
                       std::uint64_t seed, int bond_dim) {
    if (!mps_path.empty()) {
        return canonicalize(mps_from_json(read_json_file(mps_path)));
    }
    if (n < 1) {
        throw ConfigurationError("--n is required with --state");
    }
    return named_state(parse_state_name(state, phi, seed, bond_dim), n, physical_dim_for(state, d));
}

int cmd_simulate(const SimulateArgs &a, std::ostream &out) {
    const MpsState truth = load_or_build(a.state, a.mps_path, a.n, a.d, a.phi, a.seed, a.bond_dim);
    TomographyData data;
    if (a.shots > 0) {
        data = sample_measurements(truth, a.k, a.shots, a.confidence, a.seed);
    } else {
        data = perturb(exact_reductions(truth, a.k), a.noise, a.seed);
    }
    Json j = tomography_to_json(data);
    j["meta"] = run_meta(a.seed, Thresholds{});
    j["meta"]["k"] = a.k;
    j["meta"]["source"] = a.mps_path.empty() ? a.state : a.mps_path;
    write_json_file(a.out, j);
    if (!a.save_state.empty()) {
        Json s = mps_to_json(truth);
        s["meta"] = run_meta(a.seed, Thresholds{});
        write_json_file(a.save_state, s);
    }
    out << std::setprecision(12) << "E = " << data.total_error() << '\n';
    return kExitOk;
}

int cmd_make_state(const SimulateArgs &a, std::ostream &out) {
    const MpsState psi = load_or_build(a.state, "", a.n, a.d, a.phi, a.seed, a.bond_dim);
    Json s = mps_to_json(psi);
    s["meta"] = run_meta(a.seed, Thresholds{});
    write_json_file(a.out, s);
    out << "wrote " << a.out << " (n = " << psi.n() << ", d = " << psi.d() << ", D = " << psi.max_bond_dim()
        << ")\n";
    return kExitOk;
}

int cmd_reconstruct(const ReconstructArgs &a, std::ostream &out) {
    const TomographyData data = tomography_from_json(read_json_file(a.data));
    ReconstructOptions opts;
    opts.bond_dim = a.bond_dim;
    opts.max_sweeps = a.max_sweeps;
    opts.convergence_tol = a.tol;
    opts.seed = a.seed;
    opts.method = a.method == "variational" ? ReconstructMethod::variational : ReconstructMethod::dmrg;
    const ReconstructResult r = reconstruct(data, opts);
    Json j = mps_to_json(r.mps);
    j["meta"] = run_meta(a.seed, Thresholds{});
    j["meta"]["method"] = a.method;
    j["meta"]["converged"] = r.converged;
    j["meta"]["sweeps"] = r.objectives.size();
    j["meta"]["objective"] = r.objectives.empty() ? Json(nullptr) : Json(r.objectives.back());
    write_json_file(a.out, j);
    if (!a.log.empty()) {
        write_convergence_csv(a.log, r.objectives);
    }
    out << std::setprecision(6) << "objective = " << (r.objectives.empty() ? 0.0 : r.objectives.back())
        << " after " << r.objectives.size() << " sweeps" << (r.converged ? "" : " (not converged)") << '\n';
    return kExitOk;
}

int cmd_certify(const CertifyArgs &a, std::ostream &out) {
    MpsState psi = mps_from_json(read_json_file(a.mps));
    const TomographyData data = tomography_from_json(read_json_file(a.data));
    if (psi.n() != data.n_blocks || psi.d() != data.block_dim) {
        psi = block(canonicalize(psi), a.k);
    }
    Certificate cert;
    if (a.gap == "numeric" && !a.gap_value) {
        cert = certify_with_oracle_gap(psi, data, a.thresholds);
    } else if (a.gap == "numeric") {
        cert = certify(psi, data, GapChoice::numeric(*a.gap_value, "user"), a.thresholds);
    } else {
        cert = certify(psi, data, GapChoice::analytic(), a.thresholds);
    }
    Json j = certificate_to_json(cert);
    j["meta"] = run_meta(0, a.thresholds);
    if (!a.out.empty()) {
        write_json_file(a.out, j);
    }
    out << std::setprecision(10);
    if (cert.certified()) {
        out << "certified: fidelity >= " << *cert.fidelity_lower_bound << " (tau = " << *cert.tau
            << ", gap = " << *cert.gap_bound << ")\n";
        return kExitOk;
    }
    out << "failed: " << cert.reason << '\n';
    return kExitHeraldedFailure;
}

int cmd_demo(const DemoArgs &a, std::ostream &out) {
    const std::vector<DemoRow> rows = demo_aklt(a.n, a.k, a.noise_grid, a.seed);
    std::ofstream csv;
    std::ostream *sink = &out;
    if (!a.out.empty()) {
        csv.open(a.out);
        if (!csv) {
            throw IoError("cannot open '" + a.out + "' for writing");
        }
        sink = &csv;
    }
    *sink << "noise,E,status,fidelity_lower_bound,fidelity_density_bound,oracle_fidelity,"
             "oracle_fidelity_density,gamma,gap\n"
          << std::setprecision(12);
    for (const DemoRow &r : rows) {
        *sink << r.noise << ',' << r.total_error << ',' << (r.certified ? "certified" : "failed") << ','
              << r.fidelity_lower_bound << ',' << r.fidelity_density_bound << ',' << r.oracle_fidelity << ','
              << r.oracle_fidelity_density << ',' << r.gamma << ',' << r.gap << '\n';
    }
    if (!a.out.empty()) {
        out << "wrote " << rows.size() << " rows to " << a.out << '\n';
    }
    return kExitOk;
}

void add_thresholds(CLI::App *cmd, Thresholds &t) {
    cmd->add_option("--one-tol", t.one_tol, "eigenvalues above 1 - one_tol count as one")->check(CLI::PositiveNumber);
    cmd->add_option("--rank-tol", t.rank_tol, "kernel threshold for reduction eigenvalues")->check(CLI::PositiveNumber);
    cmd->add_option("--gamma-threshold", t.gamma_threshold, "smallest admissible singular value of Gamma_j")
        ->check(CLI::PositiveNumber);
}

}  // namespace

Certificate certify_with_oracle_gap(const MpsState &estimate, const TomographyData &data,
                                    const Thresholds &thresholds) {
    Certificate first = certify(estimate, data, GapChoice::analytic(), thresholds);
    if (!first.certified() && first.reason != "vacuous-gap") {
        first.gap_source = GapSource::numeric;
        return first;
    }
    const MpsState canon = canonicalize(estimate);
    const WitnessSet ws = parent_projectors(canon, thresholds.rank_tol);
    const DenseState ground = to_dense(canon);
    const ParentGap gap = parent_gap(ws, canon.n(), ground.amplitudes);
    return certify(estimate, data, GapChoice::numeric(gap.gap, gap.provenance), thresholds);
}

std::vector<DemoRow> demo_aklt(int n, int k, const std::vector<double> &noise_grid, std::uint64_t seed) {
    const MpsState truth = named_state(parse_state_name("aklt"), n, 3);
    const TomographyData exact = exact_reductions(truth, k);
    const DenseState truth_dense = to_dense(block(truth, k));
    ReconstructOptions opts;
    opts.bond_dim = 2;
    opts.max_sweeps = 50;
    opts.convergence_tol = 1e-12;
    opts.seed = seed;
    std::vector<DemoRow> rows;
    for (double level : noise_grid) {
        const TomographyData data = perturb(exact, level, seed);
        const ReconstructResult rec = reconstruct(data, opts);
        const Certificate cert = certify_with_oracle_gap(rec.mps, data, Thresholds{});
        DemoRow row;
        row.noise = level;
        row.total_error = data.total_error();
        row.certified = cert.certified();
        if (cert.certified()) {
            row.fidelity_lower_bound = *cert.fidelity_lower_bound;
            row.gamma = *cert.gamma;
            row.gap = *cert.gap_bound;
        }
        row.fidelity_density_bound = std::pow(row.fidelity_lower_bound, 1.0 / n);
        row.oracle_fidelity = exact_fidelity(rec.mps, truth_dense);
        row.oracle_fidelity_density = std::pow(row.oracle_fidelity, 1.0 / n);
        rows.push_back(row);
    }
    return rows;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Certified MPS tomography", "mpscert"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App *simulate = app.add_subcommand("simulate", "write local tomography data for a state");
    auto *state_opt = simulate->add_option("--state", sim.state, "named state (ghz, ghz_phase, w, cluster, aklt, "
                                                                 "aklt_periodic, product, random)");
    auto *mps_opt = simulate->add_option("--mps", sim.mps_path, "MPS JSON file")->check(CLI::ExistingFile);
    state_opt->excludes(mps_opt);
    simulate->add_option("--n", sim.n, "number of sites")->check(CLI::PositiveNumber);
    simulate->add_option("--d", sim.d, "physical dimension for product and random states")->check(CLI::PositiveNumber);
    simulate->add_option("--k", sim.k, "sites per block")->check(CLI::PositiveNumber);
    auto *noise_opt = simulate->add_option("--noise", sim.noise, "perturbation level")->check(CLI::NonNegativeNumber);
    auto *shots_opt = simulate->add_option("--shots", sim.shots, "shots per measurement setting");
    noise_opt->excludes(shots_opt);
    simulate->add_option("--confidence", sim.confidence, "per-window confidence for sampled data");
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--phi", sim.phi, "phase for ghz_phase");
    simulate->add_option("--bond-dim", sim.bond_dim, "bond dimension for random")->check(CLI::PositiveNumber);
    simulate->add_option("--out", sim.out, "tomography JSON output")->required();
    simulate->add_option("--save-state", sim.save_state, "also write the true state as MPS JSON");

    SimulateArgs mk;
    CLI::App *make_state = app.add_subcommand("make-state", "write a named state as MPS JSON");
    make_state->add_option("--state", mk.state)->required();
    make_state->add_option("--n", mk.n)->required()->check(CLI::PositiveNumber);
    make_state->add_option("--d", mk.d)->check(CLI::PositiveNumber);
    make_state->add_option("--seed", mk.seed);
    make_state->add_option("--phi", mk.phi);
    make_state->add_option("--bond-dim", mk.bond_dim)->check(CLI::PositiveNumber);
    make_state->add_option("--out", mk.out)->required();

    ReconstructArgs rec;
    CLI::App *reconstruct_cmd = app.add_subcommand("reconstruct", "fit an MPS estimate to tomography data");
    reconstruct_cmd->add_option("--data", rec.data)->required()->check(CLI::ExistingFile);
    reconstruct_cmd->add_option("--method", rec.method)->check(CLI::IsMember({"dmrg", "variational"}));
    reconstruct_cmd->add_option("--bond-dim", rec.bond_dim)->check(CLI::PositiveNumber);
    reconstruct_cmd->add_option("--max-sweeps", rec.max_sweeps)->check(CLI::PositiveNumber);
    reconstruct_cmd->add_option("--tol", rec.tol)->check(CLI::PositiveNumber);
    reconstruct_cmd->add_option("--seed", rec.seed);
    reconstruct_cmd->add_option("--out", rec.out)->required();
    reconstruct_cmd->add_option("--log", rec.log, "convergence CSV (sweep, objective)");

    CertifyArgs cert;
    CLI::App *certify_cmd = app.add_subcommand("certify", "certify an MPS estimate against tomography data");
    certify_cmd->add_option("--mps", cert.mps)->required()->check(CLI::ExistingFile);
    certify_cmd->add_option("--data", cert.data)->required()->check(CLI::ExistingFile);
    certify_cmd->add_option("--k", cert.k, "block the estimate by k sites when it is not already blocked")
        ->check(CLI::PositiveNumber);
    certify_cmd->add_option("--gap", cert.gap)->check(CLI::IsMember({"analytic", "numeric"}));
    certify_cmd->add_option("--gap-value", cert.gap_value, "externally computed gap for --gap numeric");
    add_thresholds(certify_cmd, cert.thresholds);
    certify_cmd->add_option("--out", cert.out, "certificate JSON output");

    DemoArgs demo;
    CLI::App *demo_cmd = app.add_subcommand("demo-aklt", "fidelity bound versus total error for the AKLT chain");
    demo_cmd->add_option("--n", demo.n)->check(CLI::PositiveNumber);
    demo_cmd->add_option("--k", demo.k)->check(CLI::PositiveNumber);
    demo_cmd->add_option("--noise-grid", demo.noise_grid)->delimiter(',');
    demo_cmd->add_option("--seed", demo.seed);
    demo_cmd->add_option("--out", demo.out, "CSV output (stdout when omitted)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (simulate->parsed()) {
            if (sim.state.empty() && sim.mps_path.empty()) {
                throw ConfigurationError("simulate needs --state or --mps");
            }
            if (shots_opt->count() > 0 && sim.shots <= 0) {
                throw ConfigurationError("--shots must be positive");
            }
            return cmd_simulate(sim, out);
        }
        if (make_state->parsed()) {
            return cmd_make_state(mk, out);
        }
        if (reconstruct_cmd->parsed()) {
            return cmd_reconstruct(rec, out);
        }
        if (certify_cmd->parsed()) {
            if (cert.gap_value && cert.gap != "numeric") {
                throw ConfigurationError("--gap-value requires --gap numeric");
            }
            return cmd_certify(cert, out);
        }
        if (demo_cmd->parsed()) {
            return cmd_demo(demo, out);
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace mpscert::cli
