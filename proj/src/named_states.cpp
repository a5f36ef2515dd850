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

#include <cmath>
#include <random>

#include "mpscert/errors.hpp"
#include "mpscert/mps.hpp"

namespace mpscert {

namespace {

using Site = std::vector<CMatrix>;

CMatrix mat(int rows, int cols, std::initializer_list<Complex> entries) {
    CMatrix m(rows, cols);
    auto it = entries.begin();
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = *it++;
        }
    }
    return m;
}

// Open chain from bulk tensors with boundary vectors: the first site becomes
// left^T A, the last A right.
std::vector<Site> close_open(const std::vector<Site> &bulk, const CVector &left, const CVector &right) {
    std::vector<Site> out = bulk;
    for (CMatrix &a : out.front()) {
        a = (left.transpose() * a).eval();
    }
    for (CMatrix &a : out.back()) {
        a = (a * right).eval();
    }
    return out;
}

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw ConfigurationError(what);
    }
}

MpsState ghz(int n, double phi) {
    Site bulk{mat(2, 2, {1, 0, 0, 0}), mat(2, 2, {0, 0, 0, 1})};
    std::vector<Site> sites(static_cast<std::size_t>(n), bulk);
    CVector ones = CVector::Ones(2);
    auto open = close_open(sites, ones, ones);
    open.back()[1] *= std::polar(1.0, phi);
    return MpsState(2, std::move(open));
}

MpsState w_state(int n) {
    // Bond state 0: no excitation yet; 1: excitation already placed.
    Site bulk{mat(2, 2, {1, 0, 0, 1}), mat(2, 2, {0, 1, 0, 0})};
    std::vector<Site> sites(static_cast<std::size_t>(n), bulk);
    CVector left(2), right(2);
    left << 1, 0;
    right << 0, 1;
    return MpsState(2, close_open(sites, left, right));
}

MpsState cluster(int n) {
    // Bond carries the previous qubit value; amplitude (-1)^{sum s_j s_{j+1}}.
    Site bulk{mat(2, 2, {1, 0, 1, 0}), mat(2, 2, {0, 1, 0, -1})};
    std::vector<Site> sites(static_cast<std::size_t>(n), bulk);
    CVector left(2), right = CVector::Ones(2);
    left << 1, 0;
    return MpsState(2, close_open(sites, left, right));
}

Site aklt_tensors() {
    // Basis order m = +1, 0, -1.
    const double a = std::sqrt(2.0 / 3.0);
    const double b = std::sqrt(1.0 / 3.0);
    return {mat(2, 2, {0, a, 0, 0}), mat(2, 2, {-b, 0, 0, b}), mat(2, 2, {0, 0, -a, 0})};
}

MpsState aklt(int n, bool periodic) {
    std::vector<Site> sites(static_cast<std::size_t>(n), aklt_tensors());
    if (periodic) {
        return MpsState(3, std::move(sites));
    }
    CVector edge(2);
    edge << 1, 0;
    return MpsState(3, close_open(sites, edge, edge));
}

MpsState product_zero(int n, int d) {
    Site site;
    for (int s = 0; s < d; ++s) {
        site.push_back(CMatrix::Constant(1, 1, s == 0 ? 1.0 : 0.0));
    }
    return MpsState(d, std::vector<Site>(static_cast<std::size_t>(n), site));
}

}  // namespace

StateSpec parse_state_name(const std::string &name, double phi, std::uint64_t seed, int bond_dim) {
    StateSpec spec;
    spec.phi = phi;
    spec.seed = seed;
    spec.bond_dim = bond_dim;
    if (name == "ghz") {
        spec.kind = StateSpec::Kind::ghz;
    } else if (name == "ghz_phase") {
        spec.kind = StateSpec::Kind::ghz_phase;
    } else if (name == "w") {
        spec.kind = StateSpec::Kind::w;
    } else if (name == "cluster") {
        spec.kind = StateSpec::Kind::cluster;
    } else if (name == "aklt") {
        spec.kind = StateSpec::Kind::aklt;
    } else if (name == "aklt_periodic") {
        spec.kind = StateSpec::Kind::aklt_periodic;
    } else if (name == "product") {
        spec.kind = StateSpec::Kind::product_zero;
    } else if (name == "random") {
        spec.kind = StateSpec::Kind::random;
    } else {
        throw ConfigurationError("unknown state name '" + name + "'");
    }
    return spec;
}

MpsState named_state(const StateSpec &spec, int n, int d) {
    using Kind = StateSpec::Kind;
    require(n >= 1, "named_state: n must be positive");
    switch (spec.kind) {
        case Kind::ghz:
        case Kind::ghz_phase:
            require(d == 2 && n >= 2, "ghz requires d = 2 and n >= 2");
            return canonicalize(ghz(n, spec.kind == Kind::ghz ? 0.0 : spec.phi));
        case Kind::w:
            require(d == 2 && n >= 2, "w requires d = 2 and n >= 2");
            return canonicalize(w_state(n));
        case Kind::cluster:
            require(d == 2 && n >= 2, "cluster requires d = 2 and n >= 2");
            return canonicalize(cluster(n));
        case Kind::aklt:
        case Kind::aklt_periodic:
            require(d == 3 && n >= 2, "aklt requires d = 3 and n >= 2");
            return canonicalize(aklt(n, spec.kind == Kind::aklt_periodic));
        case Kind::product_zero:
            require(d >= 1, "product requires d >= 1");
            return canonicalize(product_zero(n, d));
        case Kind::random:
            return random_mps(n, d, spec.bond_dim, spec.seed);
    }
    throw ConfigurationError("named_state: unhandled state kind");
}

MpsState random_mps(int n, int d, int bond_dim, std::uint64_t seed) {
    require(n >= 1 && d >= 1 && bond_dim >= 1, "random: n, d and D must be positive");
    std::vector<int> dims(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        double left = std::pow(static_cast<double>(d), j);
        double right = std::pow(static_cast<double>(d), n - j);
        dims[static_cast<std::size_t>(j)] =
            static_cast<int>(std::min<double>(bond_dim, std::min(left, right)));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::vector<Site> sites(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int s = 0; s < d; ++s) {
            CMatrix a(dims[static_cast<std::size_t>(j)], dims[static_cast<std::size_t>(j) + 1]);
            for (Eigen::Index c = 0; c < a.cols(); ++c) {
                for (Eigen::Index r = 0; r < a.rows(); ++r) {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    a(r, c) = Complex(re, im);
                }
            }
            sites[static_cast<std::size_t>(j)].push_back(std::move(a));
        }
    }
    return canonicalize(MpsState(d, std::move(sites)));
}

}  // namespace mpscert
