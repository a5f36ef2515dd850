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

#include "mpscert/witness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpscert/errors.hpp"

namespace mpscert {

namespace {

// Largest three-site dimension handled by forming h_j h_{j+1} h_j explicitly.
constexpr int kDirectAngleDimCap = 64;

std::string fmt_double(double x) {
    std::ostringstream out;
    out.precision(3);
    out << x;
    return out.str();
}

void require_left_canonical(const MpsState &psi, const char *op) {
    if (psi.canonical() != Canonical::left) {
        throw ContractViolation(std::string(op) + ": left-canonical input required");
    }
}

// gamma_j from the eigenvalues of h_j h_{j+1} h_j (or squared cosines of any
// equivalent principal-angle computation).
double classify_angles(const RVector &cos_squared, double one_tol, int j) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < cos_squared.size(); ++i) {
        const double lambda = cos_squared(i);
        if (lambda > 1.0 - 10.0 * one_tol && lambda < 1.0 - one_tol) {
            throw IllConditioned("angle", j,
                                 "gamma_angles: eigenvalue " + fmt_double(lambda) + " at bond " + std::to_string(j) +
                                     " is too close to one to classify");
        }
        if (lambda <= 1.0 - one_tol) {
            best = std::max(best, lambda);
        }
    }
    return std::sqrt(best);
}

CMatrix support_of(const WitnessSet &ws, std::size_t j) {
    if (j < ws.supports.size() && ws.supports[j].rows() > 0) {
        return ws.supports[j];
    }
    HermitianSpectrum spec = eigh(ws.projectors[j]);
    // Eigenvalues are descending: eigenvalue-0 directions are at the end.
    Eigen::Index ones = 0;
    while (ones < spec.eigenvalues.size() && spec.eigenvalues(ones) > 0.5) {
        ++ones;
    }
    return spec.eigenvectors.rightCols(spec.eigenvalues.size() - ones);
}

void check_witness(const WitnessSet &ws) {
    const Eigen::Index dim = static_cast<Eigen::Index>(ws.block_dim) * ws.block_dim;
    for (const CMatrix &h : ws.projectors) {
        if (h.rows() != dim || h.cols() != dim) {
            throw ContractViolation("witness set: projector shape does not match block_dim^2");
        }
    }
}

}  // namespace

const char *to_string(GapSource source) {
    return source == GapSource::analytic ? "analytic_1_minus_2gamma" : "numeric";
}

CMatrix gamma_map(const MpsState &psi, int j) {
    if (j < 0 || j + 1 >= psi.n()) {
        throw ContractViolation("gamma_map: bond index out of range");
    }
    const int d = psi.d();
    const int dl = psi.bond_dims()[static_cast<std::size_t>(j)];
    const int dr = psi.bond_dims()[static_cast<std::size_t>(j) + 2];
    CMatrix g(d * d, dl * dr);
    for (int s = 0; s < d; ++s) {
        for (int t = 0; t < d; ++t) {
            const CMatrix p = psi.tensor(j, s) * psi.tensor(j + 1, t);
            // Tr[X P] = sum_{a,b} X_{ba} P_{ab}: column-major vec(P) is the row.
            g.row(s * d + t) = Eigen::Map<const CVector>(p.data(), p.size()).transpose();
        }
    }
    return g;
}

GammaReport gamma_report(const MpsState &psi, double threshold) {
    require_left_canonical(psi, "gamma_report");
    GammaReport report;
    report.dimension_ok = psi.max_bond_dim() < psi.d();
    report.min_singular = psi.n() >= 2 ? INFINITY : 0.0;
    for (int j = 0; j + 1 < psi.n(); ++j) {
        const CMatrix g = gamma_map(psi, j);
        GammaBond bond;
        bond.j = j;
        bond.singular_values = singular_values(g);
        // More unknowns than outputs: a kernel exists regardless of the values.
        bond.min_singular = g.cols() > g.rows() || bond.singular_values.size() == 0
                                ? 0.0
                                : bond.singular_values.minCoeff();
        report.min_singular = std::min(report.min_singular, bond.min_singular);
        report.bonds.push_back(std::move(bond));
    }
    report.invertible = psi.n() >= 2 && report.dimension_ok && report.min_singular >= threshold;
    return report;
}

WitnessSet parent_projectors_from(const std::vector<CMatrix> &reductions, int block_dim, double rank_tol) {
    WitnessSet ws;
    ws.block_dim = block_dim;
    for (std::size_t j = 0; j < reductions.size(); ++j) {
        HermitianSpectrum spec = eigh(reductions[j]);
        const RVector &lambda = spec.eigenvalues;
        Eigen::Index support = 0;
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
            if (lambda(i) > rank_tol / 10.0 && lambda(i) < rank_tol * 10.0) {
                throw IllConditioned("kernel", static_cast<int>(j),
                                     "parent_projectors: eigenvalue " + fmt_double(lambda(i)) + " at bond " +
                                         std::to_string(j) + " is too close to rank_tol to classify");
            }
            if (lambda(i) > rank_tol) {
                ++support;
            }
        }
        const Eigen::Index kernel = lambda.size() - support;
        ws.projectors.push_back(projector_onto(spec.eigenvectors.rightCols(kernel)));
        ws.ranks.push_back(static_cast<int>(kernel));
        ws.supports.push_back(spec.eigenvectors.leftCols(support));
    }
    return ws;
}

WitnessSet parent_projectors(const MpsState &psi, double rank_tol) {
    require_left_canonical(psi, "parent_projectors");
    if (psi.n() < 2) {
        throw ContractViolation("parent_projectors: at least two sites required");
    }
    return parent_projectors_from(all_reductions(psi, 2), psi.d(), rank_tol);
}

GammaAngles gamma_angles_direct(const WitnessSet &ws, double one_tol) {
    check_witness(ws);
    const Eigen::Index d = ws.block_dim;
    const CMatrix id = CMatrix::Identity(d, d);
    GammaAngles out;
    for (std::size_t j = 0; j + 1 < ws.projectors.size(); ++j) {
        const CMatrix p = kron(ws.projectors[j], id);
        const CMatrix q = kron(id, ws.projectors[j + 1]);
        const CMatrix pqp = hermitian_part(p * q * p);
        out.gammas.push_back(classify_angles(eigvalsh(pqp), one_tol, static_cast<int>(j)));
    }
    for (double g : out.gammas) {
        out.gamma = std::max(out.gamma, g);
    }
    return out;
}

GammaAngles gamma_angles_complement(const WitnessSet &ws, double one_tol) {
    check_witness(ws);
    const Eigen::Index d = ws.block_dim;
    GammaAngles out;
    CMatrix left = ws.projectors.empty() ? CMatrix() : support_of(ws, 0);
    for (std::size_t j = 0; j + 1 < ws.projectors.size(); ++j) {
        const CMatrix right = support_of(ws, j + 1);
        const Eigen::Index rl = left.cols();
        const Eigen::Index rr = right.cols();
        // <u_a (x) e_c | e_c' (x) v_b> = sum_y conj(u_a(c', y)) v_b(y, c)
        CMatrix overlap = CMatrix::Zero(rl * d, d * rr);
        for (Eigen::Index c = 0; c < d; ++c) {
            CMatrix v_slice(d, rr);
            for (Eigen::Index y = 0; y < d; ++y) {
                v_slice.row(y) = right.row(y * d + c);
            }
            for (Eigen::Index cp = 0; cp < d; ++cp) {
                const CMatrix block = left.middleRows(cp * d, d).adjoint() * v_slice;
                for (Eigen::Index a = 0; a < rl; ++a) {
                    overlap.block(a * d + c, cp * rr, 1, rr) = block.row(a);
                }
            }
        }
        RVector cosines = singular_values(overlap);
        out.gammas.push_back(classify_angles(cosines.array().square().matrix(), one_tol, static_cast<int>(j)));
        left = right;
    }
    for (double g : out.gammas) {
        out.gamma = std::max(out.gamma, g);
    }
    return out;
}

GammaAngles gamma_angles(const WitnessSet &ws, double one_tol) {
    const long long d = ws.block_dim;
    if (d * d * d <= kDirectAngleDimCap) {
        return gamma_angles_direct(ws, one_tol);
    }
    return gamma_angles_complement(ws, one_tol);
}

int ground_space_dimension(const WitnessSet &ws, double null_tol, int cap) {
    const Eigen::Index d = ws.block_dim;
    // v holds the prefix basis: rows (beta, t), columns alpha, beta running
    // over the basis one site earlier and t over the newest site.
    CMatrix v = CMatrix::Identity(d, d);
    for (std::size_t j = 0; j < ws.projectors.size(); ++j) {
        const CMatrix &h = ws.projectors[j];
        const Eigen::Index prev = v.rows() / d;
        const Eigen::Index cols = v.cols() * d;
        if (cols > cap) {
            return -1;
        }
        // w = (v (x) 1) on rows (beta, t, s); apply 1 (x) h to every beta block.
        const CMatrix w = kron(v, CMatrix::Identity(d, d));
        CMatrix hw(w.rows(), cols);
        for (Eigen::Index b = 0; b < prev; ++b) {
            hw.middleRows(b * d * d, d * d).noalias() = h * w.middleRows(b * d * d, d * d);
        }
        const HermitianSpectrum spec = eigh(hermitian_part(w.adjoint() * hw));
        std::vector<Eigen::Index> null;
        for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
            const double lambda = spec.eigenvalues(i);
            if (lambda > null_tol && lambda < 1e3 * null_tol) {
                throw IllConditioned("ground", static_cast<int>(j),
                                     "ground_space_dimension: constraint eigenvalue " + fmt_double(lambda) +
                                         " is inside the null band at bond " + std::to_string(j));
            }
            if (lambda <= null_tol) {
                null.push_back(i);
            }
        }
        if (null.empty()) {
            return 0;
        }
        CMatrix next(cols, static_cast<Eigen::Index>(null.size()));
        for (std::size_t c = 0; c < null.size(); ++c) {
            next.col(static_cast<Eigen::Index>(c)) = spec.eigenvectors.col(null[c]);
        }
        v = std::move(next);
    }
    return static_cast<int>(v.cols());
}

Certificate certify(const MpsState &psi, const TomographyData &data, const GapChoice &gap,
                    const Thresholds &thresholds) {
    data.validate();
    if (data.n_blocks != psi.n() || data.block_dim != psi.d()) {
        throw ContractViolation("certify: estimate has " + std::to_string(psi.n()) + " sites of dimension " +
                                std::to_string(psi.d()) + " but the data has " + std::to_string(data.n_blocks) +
                                " blocks of dimension " + std::to_string(data.block_dim));
    }
    if (psi.n() < 2) {
        throw ContractViolation("certify: at least two blocked sites required");
    }

    Certificate cert;
    cert.gap_source = gap.source;
    const auto fail = [&cert](std::string reason) {
        cert.status = CertStatus::failed;
        cert.reason = std::move(reason);
        return cert;
    };

    const MpsState canon = canonicalize(psi);
    const GammaReport report = gamma_report(canon, thresholds.gamma_threshold);
    cert.min_singular = report.min_singular;
    if (!report.invertible) {
        return fail("gamma-singular");
    }

    WitnessSet ws;
    GammaAngles angles;
    try {
        ws = parent_projectors_from(all_reductions(canon, 2), canon.d(), thresholds.rank_tol);
    } catch (const IllConditioned &) {
        return fail("ill-conditioned-kernel");
    }
    // Injective Gamma maps at the open edges do not by themselves rule out a
    // degenerate zero-energy space (blocked GHZ chains are the standard example).
    try {
        if (ground_space_dimension(ws) != 1) {
            return fail("degenerate-ground-space");
        }
    } catch (const IllConditioned &) {
        return fail("ill-conditioned-ground");
    }
    try {
        angles = gamma_angles(ws, thresholds.one_tol);
    } catch (const IllConditioned &) {
        return fail("ill-conditioned-angle");
    }
    cert.gammas = angles.gammas;
    cert.gamma = angles.gamma;

    double gap_bound = 0.0;
    if (gap.source == GapSource::analytic) {
        gap_bound = 1.0 - 2.0 * angles.gamma;
        cert.gap_provenance = "analytic";
    } else {
        gap_bound = gap.value;
        cert.gap_provenance = gap.provenance;
    }
    cert.gap_bound = gap_bound;

    double total = 0.0;
    for (const TomographyWindow &w : data.windows) {
        const CMatrix &h = ws.projectors[static_cast<std::size_t>(w.j)];
        const double overlap = std::max(0.0, (h * w.sigma).trace().real());
        cert.per_site.push_back({w.j, overlap, w.epsilon});
        total += overlap + w.epsilon;
    }
    if (!(gap_bound > 0.0)) {
        return fail("vacuous-gap");
    }
    const double tau = total / gap_bound;
    cert.tau = tau;
    cert.fidelity_lower_bound = std::sqrt(std::max(0.0, 1.0 - tau));
    cert.status = CertStatus::certified;
    return cert;
}

}  // namespace mpscert
