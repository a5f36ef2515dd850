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

#include "mpscert/mps.hpp"

#include <algorithm>
#include <cmath>

#include "mpscert/errors.hpp"

namespace mpscert {

namespace {

// Singular values below this fraction of the largest are treated as exact zeros
// during canonicalization.
constexpr double kDropRelative = 1e-14;

// A canonicalization step whose output is this small relative to its inputs
// means the state itself vanishes.
constexpr double kZeroStateRelative = 1e-13;

std::int64_t checked_pow(int base, int exp, std::int64_t cap) {
    std::int64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        out *= base;
        if (out > cap) {
            return cap + 1;
        }
    }
    return out;
}

// All products A_j^{s_j} ... A_{j+w-1}^{s_{j+w-1}}, indexed with s_j most significant.
std::vector<CMatrix> window_products(const MpsState &psi, int j, int width) {
    std::vector<CMatrix> products(psi.site(j).begin(), psi.site(j).end());
    for (int site = j + 1; site < j + width; ++site) {
        std::vector<CMatrix> next;
        next.reserve(products.size() * static_cast<std::size_t>(psi.d()));
        for (const CMatrix &p : products) {
            for (int s = 0; s < psi.d(); ++s) {
                next.push_back(p * psi.tensor(site, s));
            }
        }
        products = std::move(next);
    }
    return products;
}

// rho_{s,t} = Tr[M^t^dagger L M^s R]; left == nullptr means identity.
CMatrix contract_window(const std::vector<CMatrix> &products, const CMatrix *left, const CMatrix &right) {
    const Eigen::Index count = static_cast<Eigen::Index>(products.size());
    const Eigen::Index flat = products.front().size();
    CMatrix x(count, flat);
    CMatrix y(count, flat);
    for (Eigen::Index s = 0; s < count; ++s) {
        const CMatrix &m = products[static_cast<std::size_t>(s)];
        CMatrix lmr = left ? CMatrix(*left * m * right) : CMatrix(m * right);
        x.row(s) = Eigen::Map<const CVector>(m.data(), flat).transpose();
        y.row(s) = Eigen::Map<const CVector>(lmr.data(), flat).transpose();
    }
    return y * x.adjoint();
}

std::vector<CMatrix> left_environments(const MpsState &psi) {
    std::vector<CMatrix> envs(static_cast<std::size_t>(psi.n()) + 1);
    envs[0] = CMatrix::Identity(1, 1);
    for (int j = 0; j < psi.n(); ++j) {
        const int r = psi.bond_dims()[static_cast<std::size_t>(j) + 1];
        CMatrix next = CMatrix::Zero(r, r);
        for (const CMatrix &a : psi.site(j)) {
            next.noalias() += a.adjoint() * envs[static_cast<std::size_t>(j)] * a;
        }
        envs[static_cast<std::size_t>(j) + 1] = std::move(next);
    }
    return envs;
}

}  // namespace

MpsState::MpsState(int d, std::vector<std::vector<CMatrix>> tensors, Canonical canonical)
    : d_(d), tensors_(std::move(tensors)), canonical_(canonical) {
    if (d_ < 1) {
        throw ContractViolation("MpsState: physical dimension must be positive");
    }
    if (tensors_.empty()) {
        throw ContractViolation("MpsState: at least one site is required");
    }
    const std::size_t n = tensors_.size();
    bond_dims_.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto &site = tensors_[j];
        if (site.size() != static_cast<std::size_t>(d_)) {
            throw ContractViolation("MpsState: site " + std::to_string(j) + " has " +
                                    std::to_string(site.size()) + " matrices, expected d = " +
                                    std::to_string(d_));
        }
        const Eigen::Index rows = site.front().rows();
        const Eigen::Index cols = site.front().cols();
        if (rows < 1 || cols < 1) {
            throw ContractViolation("MpsState: empty tensor at site " + std::to_string(j));
        }
        for (const CMatrix &a : site) {
            if (a.rows() != rows || a.cols() != cols) {
                throw ContractViolation("MpsState: inconsistent tensor shapes at site " + std::to_string(j));
            }
            if (!all_finite(a)) {
                throw ContractViolation("MpsState: non-finite entry at site " + std::to_string(j));
            }
        }
        if (j > 0 && bond_dims_[j] != rows) {
            throw ContractViolation("MpsState: bond " + std::to_string(j) + " mismatch between sites " +
                                    std::to_string(j - 1) + " and " + std::to_string(j));
        }
        bond_dims_[j] = static_cast<int>(rows);
        bond_dims_[j + 1] = static_cast<int>(cols);
    }
    if (bond_dims_.front() != bond_dims_.back()) {
        throw ContractViolation("MpsState: boundary bond dimensions must agree for the trace closure");
    }
    if (canonical_ == Canonical::left) {
        if (!open_boundary()) {
            throw ContractViolation("MpsState: left-canonical form requires open boundary");
        }
        if (left_canonical_defect() > 1e-10) {
            throw ContractViolation("MpsState: tensors are not left-canonical");
        }
    }
}

int MpsState::max_bond_dim() const {
    return *std::max_element(bond_dims_.begin(), bond_dims_.end());
}

double MpsState::left_canonical_defect() const {
    double worst = 0.0;
    for (const auto &site : tensors_) {
        const Eigen::Index r = site.front().cols();
        CMatrix sum = CMatrix::Zero(r, r);
        for (const CMatrix &a : site) {
            sum.noalias() += a.adjoint() * a;
        }
        worst = std::max(worst, (sum - CMatrix::Identity(r, r)).cwiseAbs().maxCoeff());
    }
    return worst;
}

MpsState to_open_boundary(const MpsState &psi) {
    const int b = psi.bond_dims().front();
    if (b == 1) {
        return psi;
    }
    const int n = psi.n();
    const int d = psi.d();
    std::vector<std::vector<CMatrix>> out(static_cast<std::size_t>(n));
    if (n == 1) {
        for (int s = 0; s < d; ++s) {
            out[0].push_back(CMatrix::Constant(1, 1, psi.tensor(0, s).trace()));
        }
        return MpsState(d, std::move(out));
    }
    // The extra index a0 remembers which boundary value the trace started from.
    for (int j = 0; j < n; ++j) {
        const int dl = psi.bond_dims()[static_cast<std::size_t>(j)];
        const int dr = psi.bond_dims()[static_cast<std::size_t>(j) + 1];
        for (int s = 0; s < d; ++s) {
            const CMatrix &a = psi.tensor(j, s);
            CMatrix t;
            if (j == 0) {
                t = CMatrix::Zero(1, b * dr);
                for (int a0 = 0; a0 < b; ++a0) {
                    t.block(0, a0 * dr, 1, dr) = a.row(a0);
                }
            } else if (j == n - 1) {
                t = CMatrix::Zero(b * dl, 1);
                for (int a0 = 0; a0 < b; ++a0) {
                    t.block(a0 * dl, 0, dl, 1) = a.col(a0);
                }
            } else {
                t = kron(CMatrix::Identity(b, b), a);
            }
            out[static_cast<std::size_t>(j)].push_back(std::move(t));
        }
    }
    return MpsState(d, std::move(out));
}

MpsState canonicalize(const MpsState &input) {
    const MpsState psi = to_open_boundary(input);
    const int n = psi.n();
    const int d = psi.d();
    std::vector<std::vector<CMatrix>> out(static_cast<std::size_t>(n));
    CMatrix carry = CMatrix::Identity(1, 1);
    for (int j = 0; j < n; ++j) {
        const Eigen::Index l = carry.rows();
        const Eigen::Index r = psi.bond_dims()[static_cast<std::size_t>(j) + 1];
        CMatrix stacked(d * l, r);
        double stack_norm = 0.0;
        for (int s = 0; s < d; ++s) {
            stacked.block(s * l, 0, l, r) = carry * psi.tensor(j, s);
            stack_norm += psi.tensor(j, s).squaredNorm();
        }
        const double scale = carry.norm() * std::sqrt(stack_norm);
        auto &site = out[static_cast<std::size_t>(j)];
        if (j == n - 1) {
            const double norm = stacked.norm();
            if (!(norm > kZeroStateRelative * scale) || !std::isfinite(norm)) {
                throw DegenerateInput("canonicalize: state has zero norm");
            }
            stacked /= norm;
            for (int s = 0; s < d; ++s) {
                site.push_back(stacked.block(s * l, 0, l, r));
            }
            break;
        }
        SvdResult f = svd(stacked);
        const double smax = f.s.size() > 0 ? f.s(0) : 0.0;
        if (!(smax > kZeroStateRelative * scale)) {
            throw DegenerateInput("canonicalize: state has zero norm");
        }
        Eigen::Index keep = 1;
        while (keep < f.s.size() && f.s(keep) > kDropRelative * smax) {
            ++keep;
        }
        for (int s = 0; s < d; ++s) {
            site.push_back(f.u.block(s * l, 0, l, keep));
        }
        carry = (f.s.head(keep) / smax).cast<Complex>().asDiagonal() * f.v.leftCols(keep).adjoint();
    }
    return MpsState(d, std::move(out), Canonical::left);
}

MpsState block(const MpsState &psi, int k) {
    if (k < 1 || psi.n() % k != 0) {
        throw ConfigurationError("block: k = " + std::to_string(k) + " does not divide n = " +
                                 std::to_string(psi.n()));
    }
    if (k == 1) {
        return psi;
    }
    const int blocks = psi.n() / k;
    std::vector<std::vector<CMatrix>> out(static_cast<std::size_t>(blocks));
    for (int b = 0; b < blocks; ++b) {
        out[static_cast<std::size_t>(b)] = window_products(psi, b * k, k);
    }
    const int dk = static_cast<int>(checked_pow(psi.d(), k, std::int64_t{1} << 30));
    return MpsState(dk, std::move(out), psi.canonical());
}

std::vector<CMatrix> right_environments(const MpsState &psi) {
    if (!psi.open_boundary()) {
        throw ContractViolation("right_environments: open boundary required");
    }
    const int n = psi.n();
    std::vector<CMatrix> envs(static_cast<std::size_t>(n) + 1);
    envs[static_cast<std::size_t>(n)] = CMatrix::Identity(1, 1);
    for (int j = n - 1; j >= 0; --j) {
        const int l = psi.bond_dims()[static_cast<std::size_t>(j)];
        CMatrix next = CMatrix::Zero(l, l);
        for (const CMatrix &a : psi.site(j)) {
            next.noalias() += a * envs[static_cast<std::size_t>(j) + 1] * a.adjoint();
        }
        envs[static_cast<std::size_t>(j)] = std::move(next);
    }
    return envs;
}

CMatrix reduction(const MpsState &psi, int j, int width) {
    if (psi.canonical() != Canonical::left) {
        throw ContractViolation("reduction: left-canonical input required (call canonicalize first)");
    }
    if (width < 1 || j < 0 || j + width > psi.n()) {
        throw ContractViolation("reduction: window [" + std::to_string(j) + ", " + std::to_string(j + width) +
                                ") outside chain of " + std::to_string(psi.n()) + " sites");
    }
    CMatrix right = CMatrix::Identity(1, 1);
    for (int site = psi.n() - 1; site >= j + width; --site) {
        const int l = psi.bond_dims()[static_cast<std::size_t>(site)];
        CMatrix next = CMatrix::Zero(l, l);
        for (const CMatrix &a : psi.site(site)) {
            next.noalias() += a * right * a.adjoint();
        }
        right = std::move(next);
    }
    return hermitian_part(contract_window(window_products(psi, j, width), nullptr, right));
}

std::vector<CMatrix> all_reductions(const MpsState &input, int width) {
    const MpsState psi = to_open_boundary(input);
    if (width < 1 || width > psi.n()) {
        throw ContractViolation("all_reductions: width out of range");
    }
    const auto lefts = left_environments(psi);
    const auto rights = right_environments(psi);
    const double norm = lefts.back()(0, 0).real();
    if (!(norm > 0.0)) {
        throw DegenerateInput("all_reductions: state has zero norm");
    }
    std::vector<CMatrix> out;
    for (int j = 0; j + width <= psi.n(); ++j) {
        CMatrix rho = contract_window(window_products(psi, j, width), &lefts[static_cast<std::size_t>(j)],
                                      rights[static_cast<std::size_t>(j + width)]);
        out.push_back(hermitian_part(rho / norm));
    }
    return out;
}

namespace {

Complex contract_product(const MpsState &psi, const std::vector<CMatrix> *ops) {
    CMatrix env = CMatrix::Identity(1, 1);
    for (int j = 0; j < psi.n(); ++j) {
        const int r = psi.bond_dims()[static_cast<std::size_t>(j) + 1];
        CMatrix next = CMatrix::Zero(r, r);
        for (int s = 0; s < psi.d(); ++s) {
            const CMatrix ket = env * psi.tensor(j, s);
            for (int t = 0; t < psi.d(); ++t) {
                Complex w = ops ? (*ops)[static_cast<std::size_t>(j)](t, s) : Complex(s == t ? 1.0 : 0.0);
                if (w == Complex(0.0)) {
                    continue;
                }
                next.noalias() += w * psi.tensor(j, t).adjoint() * ket;
            }
        }
        env = std::move(next);
    }
    return env(0, 0);
}

}  // namespace

Complex expectation_product(const MpsState &input, const std::vector<CMatrix> &ops) {
    if (static_cast<int>(ops.size()) != input.n()) {
        throw ContractViolation("expectation_product: expected one operator per site");
    }
    for (const CMatrix &op : ops) {
        if (op.rows() != input.d() || op.cols() != input.d()) {
            throw ContractViolation("expectation_product: operator shape does not match physical dimension");
        }
    }
    const MpsState psi = to_open_boundary(input);
    const double norm = contract_product(psi, nullptr).real();
    if (!(norm > 0.0)) {
        throw DegenerateInput("expectation_product: state has zero norm");
    }
    return contract_product(psi, &ops) / norm;
}

double norm_squared(const MpsState &input) {
    return contract_product(to_open_boundary(input), nullptr).real();
}

DenseState to_dense(const MpsState &psi, std::int64_t cap) {
    const std::int64_t dim = checked_pow(psi.d(), psi.n(), cap);
    if (dim > cap) {
        throw OracleCapExceeded("to_dense: " + std::to_string(psi.d()) + "^" + std::to_string(psi.n()) +
                                " amplitudes exceed the cap of " + std::to_string(cap));
    }
    const int b0 = psi.bond_dims().front();
    // Row block p holds the prefix product for configuration p.
    CMatrix prefix = CMatrix::Identity(b0, b0);
    Eigen::Index count = 1;
    for (int j = 0; j < psi.n(); ++j) {
        const int dr = psi.bond_dims()[static_cast<std::size_t>(j) + 1];
        CMatrix next(count * psi.d() * b0, dr);
        for (Eigen::Index p = 0; p < count; ++p) {
            for (int s = 0; s < psi.d(); ++s) {
                next.block((p * psi.d() + s) * b0, 0, b0, dr).noalias() =
                    prefix.block(p * b0, 0, b0, prefix.cols()) * psi.tensor(j, s);
            }
        }
        prefix = std::move(next);
        count *= psi.d();
    }
    DenseState out{psi.n(), psi.d(), CVector(count)};
    for (Eigen::Index p = 0; p < count; ++p) {
        out.amplitudes(p) = prefix.block(p * b0, 0, b0, b0).trace();
    }
    const double norm = out.amplitudes.norm();
    if (!(norm > 0.0)) {
        throw DegenerateInput("to_dense: state has zero norm");
    }
    out.amplitudes /= norm;
    return out;
}

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace mpscert
