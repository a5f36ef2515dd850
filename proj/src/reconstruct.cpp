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

#include "mpscert/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpscert/errors.hpp"

namespace mpscert {

using detail::Sites;

namespace {

constexpr double kCutTieTol = 1e-12;
constexpr int kMaxBacktracks = 20;

int phys(const Sites &s) {
    return static_cast<int>(s.front().size());
}

// Stack [A^0; A^1; ...] has orthonormal columns after this; the remainder moves right.
void orthonormalize_left(Sites &s, int c) {
    std::vector<CMatrix> &a = s[static_cast<std::size_t>(c)];
    const int d = static_cast<int>(a.size());
    const Eigen::Index dl = a[0].rows();
    const Eigen::Index dr = a[0].cols();
    CMatrix m(d * dl, dr);
    for (int t = 0; t < d; ++t) {
        m.middleRows(t * dl, dl) = a[static_cast<std::size_t>(t)];
    }
    const SvdResult f = svd(m);
    for (int t = 0; t < d; ++t) {
        a[static_cast<std::size_t>(t)] = f.u.middleRows(t * dl, dl);
    }
    const CMatrix carry = f.s.cast<Complex>().asDiagonal() * f.v.adjoint();
    for (CMatrix &next : s[static_cast<std::size_t>(c) + 1]) {
        next = (carry * next).eval();
    }
}

// Row block [B^0 B^1 ...] has orthonormal rows after this; the remainder moves left.
void orthonormalize_right(Sites &s, int c) {
    std::vector<CMatrix> &b = s[static_cast<std::size_t>(c)];
    const int d = static_cast<int>(b.size());
    const Eigen::Index dl = b[0].rows();
    const Eigen::Index dr = b[0].cols();
    CMatrix m(dl, d * dr);
    for (int t = 0; t < d; ++t) {
        m.middleCols(t * dr, dr) = b[static_cast<std::size_t>(t)];
    }
    const SvdResult f = svd(m);
    const CMatrix vh = f.v.adjoint();
    for (int t = 0; t < d; ++t) {
        b[static_cast<std::size_t>(t)] = vh.middleCols(t * dr, dr);
    }
    const CMatrix carry = f.u * f.s.cast<Complex>().asDiagonal();
    for (CMatrix &prev : s[static_cast<std::size_t>(c) - 1]) {
        prev = (prev * carry).eval();
    }
}

// Bra-ket environments for a chain in mixed canonical form.
//   left[c]        completed terms on sites < c, D_c x D_c
//   left_open[c]   term c-1 contracted through site c-1, index (a d + t)
//   right[c]       completed terms on sites > c, D_{c+1} x D_{c+1}
//   right_open[c]  term c contracted through site c+1, index (t D_{c+1} + b)
struct Environments {
    std::vector<CMatrix> left, left_open, right, right_open;
};

void extend_left(Environments &env, const Sites &s, const std::vector<CMatrix> &ops, int c) {
    const std::vector<CMatrix> &a = s[static_cast<std::size_t>(c)];
    const int n = static_cast<int>(s.size());
    const int d = static_cast<int>(a.size());
    const Eigen::Index dl = a[0].rows();
    const Eigen::Index dr = a[0].cols();
    const std::size_t cu = static_cast<std::size_t>(c);

    CMatrix next = CMatrix::Zero(dr, dr);
    for (int t = 0; t < d; ++t) {
        next += a[static_cast<std::size_t>(t)].adjoint() * env.left[cu] * a[static_cast<std::size_t>(t)];
    }
    if (c >= 1) {
        const CMatrix &k = env.left_open[cu];
        for (int tp = 0; tp < d; ++tp) {
            for (int t = 0; t < d; ++t) {
                CMatrix blk(dl, dl);
                for (Eigen::Index ap = 0; ap < dl; ++ap) {
                    for (Eigen::Index aa = 0; aa < dl; ++aa) {
                        blk(ap, aa) = k(ap * d + tp, aa * d + t);
                    }
                }
                next += a[static_cast<std::size_t>(tp)].adjoint() * blk * a[static_cast<std::size_t>(t)];
            }
        }
    }
    env.left[cu + 1] = next;

    if (c + 1 < n) {
        const CMatrix &op = ops[cu];
        CMatrix k = CMatrix::Zero(dr * d, dr * d);
        for (int up = 0; up < d; ++up) {
            for (int u = 0; u < d; ++u) {
                const CMatrix g = a[static_cast<std::size_t>(up)].adjoint() * a[static_cast<std::size_t>(u)];
                for (int tp = 0; tp < d; ++tp) {
                    for (int t = 0; t < d; ++t) {
                        const Complex coef = op(up * d + tp, u * d + t);
                        if (coef == Complex(0.0)) {
                            continue;
                        }
                        for (Eigen::Index bp = 0; bp < dr; ++bp) {
                            for (Eigen::Index b = 0; b < dr; ++b) {
                                k(bp * d + tp, b * d + t) += coef * g(bp, b);
                            }
                        }
                    }
                }
            }
        }
        env.left_open[cu + 1] = k;
    }
}

void extend_right(Environments &env, const Sites &s, const std::vector<CMatrix> &ops, int c) {
    const std::vector<CMatrix> &b = s[static_cast<std::size_t>(c)];
    const int n = static_cast<int>(s.size());
    const int d = static_cast<int>(b.size());
    const Eigen::Index dl = b[0].rows();
    const Eigen::Index dr = b[0].cols();
    const std::size_t cu = static_cast<std::size_t>(c);

    CMatrix next = CMatrix::Zero(dl, dl);
    for (int t = 0; t < d; ++t) {
        const CMatrix &bt = b[static_cast<std::size_t>(t)];
        next += bt.conjugate() * env.right[cu] * bt.transpose();
    }
    if (c + 1 < n) {
        const CMatrix &k = env.right_open[cu];
        for (int tp = 0; tp < d; ++tp) {
            for (int t = 0; t < d; ++t) {
                const CMatrix blk = k.block(tp * dr, t * dr, dr, dr);
                next += b[static_cast<std::size_t>(tp)].conjugate() * blk * b[static_cast<std::size_t>(t)].transpose();
            }
        }
    }
    env.right[cu - 1] = next;

    const CMatrix &op = ops[cu - 1];
    CMatrix k = CMatrix::Zero(d * dl, d * dl);
    for (int vp = 0; vp < d; ++vp) {
        for (int v = 0; v < d; ++v) {
            const CMatrix g = b[static_cast<std::size_t>(vp)].conjugate() * b[static_cast<std::size_t>(v)].transpose();
            for (int tp = 0; tp < d; ++tp) {
                for (int t = 0; t < d; ++t) {
                    const Complex coef = op(tp * d + vp, t * d + v);
                    if (coef == Complex(0.0)) {
                        continue;
                    }
                    k.block(tp * dl, t * dl, dl, dl) += coef * g;
                }
            }
        }
    }
    env.right_open[cu - 1] = k;
}

Environments build_environments(const Sites &s, int center, const std::vector<CMatrix> &ops) {
    const int n = static_cast<int>(s.size());
    Environments env;
    env.left.resize(static_cast<std::size_t>(n));
    env.left_open.resize(static_cast<std::size_t>(n));
    env.right.resize(static_cast<std::size_t>(n));
    env.right_open.resize(static_cast<std::size_t>(n));
    env.left[0] = CMatrix::Zero(s.front()[0].rows(), s.front()[0].rows());
    env.right[static_cast<std::size_t>(n) - 1] = CMatrix::Zero(s.back()[0].cols(), s.back()[0].cols());
    for (int c = 0; c < center; ++c) {
        extend_left(env, s, ops, c);
    }
    for (int c = n - 1; c > center; --c) {
        extend_right(env, s, ops, c);
    }
    return env;
}

CMatrix local_operator(const Environments &env, const Sites &s, int c) {
    const int n = static_cast<int>(s.size());
    const int d = phys(s);
    const std::size_t cu = static_cast<std::size_t>(c);
    const Eigen::Index dl = s[cu][0].rows();
    const Eigen::Index dr = s[cu][0].cols();
    const CMatrix id_d = CMatrix::Identity(d, d);
    CMatrix h = kron(kron(env.left[cu], id_d), CMatrix::Identity(dr, dr));
    h += kron(CMatrix::Identity(dl * d, dl * d), env.right[cu]);
    if (c >= 1) {
        h += kron(env.left_open[cu], CMatrix::Identity(dr, dr));
    }
    if (c + 1 < n) {
        h += kron(CMatrix::Identity(dl, dl), env.right_open[cu]);
    }
    return hermitian_part(h);
}

CVector flatten(const std::vector<CMatrix> &a) {
    const int d = static_cast<int>(a.size());
    const Eigen::Index dl = a[0].rows();
    const Eigen::Index dr = a[0].cols();
    CVector x(dl * d * dr);
    for (Eigen::Index aa = 0; aa < dl; ++aa) {
        for (int t = 0; t < d; ++t) {
            for (Eigen::Index b = 0; b < dr; ++b) {
                x((aa * d + t) * dr + b) = a[static_cast<std::size_t>(t)](aa, b);
            }
        }
    }
    return x;
}

void unflatten(const CVector &x, std::vector<CMatrix> &a) {
    const int d = static_cast<int>(a.size());
    const Eigen::Index dl = a[0].rows();
    const Eigen::Index dr = a[0].cols();
    for (Eigen::Index aa = 0; aa < dl; ++aa) {
        for (int t = 0; t < d; ++t) {
            for (Eigen::Index b = 0; b < dr; ++b) {
                a[static_cast<std::size_t>(t)](aa, b) = x((aa * d + t) * dr + b);
            }
        }
    }
}

int capped_bond(int bond_dim, int d, int m, int n) {
    double v = bond_dim;
    v = std::min(v, std::pow(static_cast<double>(d), m));
    v = std::min(v, std::pow(static_cast<double>(d), n - m));
    return static_cast<int>(v);
}

CMatrix matrix_sign(const CMatrix &h) {
    HermitianSpectrum spec = eigh(h);
    RVector sgn(spec.eigenvalues.size());
    for (Eigen::Index i = 0; i < sgn.size(); ++i) {
        const double l = spec.eigenvalues(i);
        sgn(i) = l > 0.0 ? 1.0 : (l < 0.0 ? -1.0 : 0.0);
    }
    return spec.eigenvectors * sgn.cast<Complex>().asDiagonal() * spec.eigenvectors.adjoint();
}

bool stalled(const std::vector<double> &objectives, double previous, double tol) {
    const double current = objectives.back();
    return previous - current < tol;
}

}  // namespace

void ReconstructOptions::validate() const {
    if (bond_dim < 1) {
        throw ConfigurationError("reconstruct: bond dimension must be at least 1");
    }
    if (max_sweeps < 1) {
        throw ConfigurationError("reconstruct: max_sweeps must be at least 1");
    }
    if (!(convergence_tol > 0.0)) {
        throw ConfigurationError("reconstruct: convergence_tol must be positive");
    }
}

namespace detail {

Sites mixed_canonical(const Sites &sites, int center) {
    const int n = static_cast<int>(sites.size());
    if (center < 0 || center >= n) {
        throw ContractViolation("mixed_canonical: center out of range");
    }
    Sites s = sites;
    for (int c = 0; c < center; ++c) {
        orthonormalize_left(s, c);
    }
    for (int c = n - 1; c > center; --c) {
        orthonormalize_right(s, c);
    }
    return s;
}

CMatrix effective_operator(const Sites &sites, int center, const std::vector<CMatrix> &ops) {
    const int n = static_cast<int>(sites.size());
    if (ops.size() + 1 != sites.size()) {
        throw ContractViolation("effective_operator: need one operator per neighboring pair");
    }
    if (center < 0 || center >= n) {
        throw ContractViolation("effective_operator: center out of range");
    }
    return local_operator(build_environments(sites, center, ops), sites, center);
}

}  // namespace detail

WitnessSet empirical_parent(const TomographyData &data, int bond_dim, double null_tol) {
    data.validate();
    if (bond_dim < 1) {
        throw ConfigurationError("empirical_parent: bond dimension must be at least 1");
    }
    if (data.block_dim <= bond_dim) {
        throw ConfigurationError("empirical_parent: block dimension " + std::to_string(data.block_dim) +
                                 " must exceed the bond dimension " + std::to_string(bond_dim) +
                                 "; block more sites");
    }
    const int db = data.block_dim;
    const int nb = data.n_blocks;
    const Eigen::Index dim = static_cast<Eigen::Index>(db) * db;
    WitnessSet ws;
    ws.block_dim = db;
    for (const TomographyWindow &w : data.windows) {
        const Eigen::Index keep_max = static_cast<Eigen::Index>(capped_bond(bond_dim, db, w.j, nb)) *
                                      capped_bond(bond_dim, db, w.j + 2, nb);
        HermitianSpectrum spec = eigh(w.sigma);
        const RVector &lambda = spec.eigenvalues;
        Eigen::Index keep = std::min(dim, keep_max);
        while (keep > 0 && lambda(keep - 1) <= null_tol) {
            --keep;
        }
        if (keep > 0 && keep < dim && lambda(keep - 1) - lambda(keep) < kCutTieTol) {
            throw IllConditioned("cut", w.j,
                                 "empirical_parent: eigenvalues straddling the rank cut at window " +
                                     std::to_string(w.j) + " are tied");
        }
        ws.projectors.push_back(projector_onto(spec.eigenvectors.rightCols(dim - keep)));
        ws.ranks.push_back(static_cast<int>(dim - keep));
        ws.supports.push_back(spec.eigenvectors.leftCols(keep));
    }
    return ws;
}

ReconstructResult dmrg_ground(const WitnessSet &ws, const ReconstructOptions &options) {
    options.validate();
    const int n = static_cast<int>(ws.projectors.size()) + 1;
    const int d = ws.block_dim;
    if (n < 2) {
        throw ContractViolation("dmrg_ground: need at least one window");
    }
    for (const CMatrix &h : ws.projectors) {
        if (h.rows() != static_cast<Eigen::Index>(d) * d || h.cols() != h.rows()) {
            throw ContractViolation("dmrg_ground: inconsistent window dimensions");
        }
    }
    const std::vector<CMatrix> &ops = ws.projectors;
    Sites s = detail::mixed_canonical(random_mps(n, d, options.bond_dim, options.seed).tensors(), 0);
    Environments env = build_environments(s, 0, ops);

    const auto optimize = [&](int c) {
        const HermitianSpectrum spec = eigh(local_operator(env, s, c));
        const Eigen::Index last = spec.eigenvalues.size() - 1;
        unflatten(spec.eigenvectors.col(last), s[static_cast<std::size_t>(c)]);
        return spec.eigenvalues(last);
    };

    std::vector<double> objectives;
    bool converged = false;
    double previous = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        double energy = 0.0;
        for (int c = 0; c + 1 < n; ++c) {
            energy = optimize(c);
            orthonormalize_left(s, c);
            extend_left(env, s, ops, c);
        }
        for (int c = n - 1; c > 0; --c) {
            energy = optimize(c);
            orthonormalize_right(s, c);
            extend_right(env, s, ops, c);
        }
        objectives.push_back(energy);
        if (stalled(objectives, previous, options.convergence_tol)) {
            converged = true;
            break;
        }
        previous = energy;
    }
    return {canonicalize(MpsState(d, std::move(s))), std::move(objectives), converged};
}

double trace_distance_objective(const MpsState &psi, const TomographyData &data) {
    if (psi.n() != data.n_blocks || psi.d() != data.block_dim) {
        throw ContractViolation("trace_distance_objective: state and data are not aligned");
    }
    const std::vector<CMatrix> rho = all_reductions(psi, 2);
    double total = 0.0;
    for (const TomographyWindow &w : data.windows) {
        total += trace_norm(rho[static_cast<std::size_t>(w.j)] - w.sigma);
    }
    return total;
}

ReconstructResult variational_fit(const TomographyData &data, const ReconstructOptions &options,
                                  const std::optional<MpsState> &initial) {
    options.validate();
    data.validate();
    const int n = data.n_blocks;
    const int d = data.block_dim;
    const MpsState start = initial ? *initial : random_mps(n, d, options.bond_dim, options.seed);
    if (start.n() != n || start.d() != d) {
        throw ContractViolation("variational_fit: initial state does not match the data");
    }
    Sites s = detail::mixed_canonical(to_open_boundary(start).tensors(), 0);
    {
        CVector x = flatten(s[0]);
        unflatten(x / x.norm(), s[0]);
    }

    const auto objective_with = [&](int c, const CVector &x) {
        Sites trial = s;
        unflatten(x, trial[static_cast<std::size_t>(c)]);
        return trace_distance_objective(MpsState(d, std::move(trial)), data);
    };

    double current = trace_distance_objective(MpsState(d, s), data);
    const auto update = [&](int c) {
        const std::vector<CMatrix> rho = all_reductions(MpsState(d, s), 2);
        std::vector<CMatrix> signs;
        for (const TomographyWindow &w : data.windows) {
            signs.push_back(matrix_sign(rho[static_cast<std::size_t>(w.j)] - w.sigma));
        }
        const CMatrix g = local_operator(build_environments(s, c, signs), s, c);
        const CVector x = flatten(s[static_cast<std::size_t>(c)]);

        const HermitianSpectrum spec = eigh(g);
        const CVector lowest = spec.eigenvectors.col(spec.eigenvalues.size() - 1);
        double value = objective_with(c, lowest);
        if (value <= current) {
            unflatten(lowest, s[static_cast<std::size_t>(c)]);
            current = value;
            return;
        }
        const Complex mean = x.dot(g * x);
        const CVector grad = g * x - mean * x;
        if (grad.norm() == 0.0) {
            return;
        }
        double step = 1.0;
        for (int i = 0; i < kMaxBacktracks; ++i, step *= 0.5) {
            CVector y = x - step * grad;
            y /= y.norm();
            value = objective_with(c, y);
            if (value <= current) {
                unflatten(y, s[static_cast<std::size_t>(c)]);
                current = value;
                return;
            }
        }
    };

    std::vector<double> objectives;
    bool converged = false;
    double previous = current;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        for (int c = 0; c + 1 < n; ++c) {
            update(c);
            orthonormalize_left(s, c);
        }
        for (int c = n - 1; c > 0; --c) {
            update(c);
            orthonormalize_right(s, c);
        }
        objectives.push_back(current);
        if (stalled(objectives, previous, options.convergence_tol)) {
            converged = true;
            break;
        }
        previous = current;
    }
    return {canonicalize(MpsState(d, std::move(s))), std::move(objectives), converged};
}

ReconstructResult reconstruct(const TomographyData &data, const ReconstructOptions &options) {
    options.validate();
    if (options.method == ReconstructMethod::dmrg) {
        return dmrg_ground(empirical_parent(data, options.bond_dim), options);
    }
    return variational_fit(data, options);
}

}  // namespace mpscert
