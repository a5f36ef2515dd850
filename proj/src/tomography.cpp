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

#include "mpscert/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mpscert/errors.hpp"

namespace mpscert {

namespace {

constexpr double kStateTol = 1e-9;

bool is_prime(int d) {
    if (d < 2) {
        return false;
    }
    for (int p = 2; p * p <= d; ++p) {
        if (d % p == 0) {
            return false;
        }
    }
    return true;
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        out *= base;
    }
    return out;
}

CMatrix random_hermitian_unit(std::mt19937_64 &rng, Eigen::Index dim) {
    std::normal_distribution<double> gauss;
    CMatrix g(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(r, c) = Complex(re, im);
        }
    }
    CMatrix h = hermitian_part(g);
    const double norm = eigvalsh(h).cwiseAbs().maxCoeff();
    return h / norm;
}

// Draw a multinomial sample by successive conditional binomials.
std::vector<std::int64_t> multinomial(std::mt19937_64 &rng, std::int64_t shots, const RVector &p) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(p.size()), 0);
    std::int64_t remaining = shots;
    double mass = 1.0;
    for (Eigen::Index x = 0; x < p.size() && remaining > 0; ++x) {
        if (x + 1 == p.size()) {
            counts[static_cast<std::size_t>(x)] = remaining;
            break;
        }
        const double q = mass > 0.0 ? std::clamp(p(x) / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::int64_t> draw(remaining, q);
        const std::int64_t c = draw(rng);
        counts[static_cast<std::size_t>(x)] = c;
        remaining -= c;
        mass -= p(x);
    }
    return counts;
}

}  // namespace

double TomographyData::total_error() const {
    double total = 0.0;
    for (const TomographyWindow &w : windows) {
        total += w.epsilon;
    }
    return total;
}

void TomographyData::validate() const {
    if (n_blocks < 2 || block_dim < 1) {
        throw ContractViolation("tomography data: need at least two blocks of positive dimension");
    }
    if (windows.size() != static_cast<std::size_t>(n_blocks - 1)) {
        throw ContractViolation("tomography data: expected " + std::to_string(n_blocks - 1) + " windows, got " +
                                std::to_string(windows.size()));
    }
    if (confidence && !(*confidence > 0.0 && *confidence <= 1.0)) {
        throw ContractViolation("tomography data: confidence must lie in (0, 1]");
    }
    const Eigen::Index dim = static_cast<Eigen::Index>(block_dim) * block_dim;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const TomographyWindow &w = windows[i];
        const std::string where = "tomography window " + std::to_string(i) + ": ";
        if (w.j != static_cast<int>(i)) {
            throw ContractViolation(where + "windows must be listed in order j = 0, 1, ...");
        }
        if (w.sigma.rows() != dim || w.sigma.cols() != dim) {
            throw ContractViolation(where + "sigma must be block_dim^2 square");
        }
        if (!std::isfinite(w.epsilon) || w.epsilon < 0.0) {
            throw ContractViolation(where + "epsilon must be finite and non-negative");
        }
        if (!all_finite(w.sigma) || hermitian_defect(w.sigma) > kStateTol) {
            throw ContractViolation(where + "sigma is not Hermitian");
        }
        if (std::abs(w.sigma.trace() - Complex(1.0)) > kStateTol) {
            throw ContractViolation(where + "sigma does not have unit trace");
        }
        if (eigvalsh(hermitian_part(w.sigma)).minCoeff() < -kStateTol) {
            throw ContractViolation(where + "sigma is not positive semidefinite");
        }
    }
}

TomographyData exact_reductions(const MpsState &psi, int k) {
    const MpsState blocked = block(canonicalize(psi), k);
    if (blocked.n() < 2) {
        throw ConfigurationError("tomography needs at least two blocked sites");
    }
    TomographyData data;
    data.n_blocks = blocked.n();
    data.block_dim = blocked.d();
    std::vector<CMatrix> rho = all_reductions(blocked, 2);
    for (std::size_t j = 0; j < rho.size(); ++j) {
        data.windows.push_back({static_cast<int>(j), hermitian_part(rho[j]), 0.0});
    }
    return data;
}

std::uint64_t window_seed(std::uint64_t seed, int j) {
    // splitmix64 finalizer over a per-window offset.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(j) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

TomographyData perturb(const TomographyData &data, double level, std::uint64_t seed) {
    if (!(level >= 0.0) || !std::isfinite(level)) {
        throw ContractViolation("perturb: level must be finite and non-negative");
    }
    TomographyData out = data;
    if (level == 0.0) {
        return out;
    }
    for (TomographyWindow &w : out.windows) {
        std::mt19937_64 rng(window_seed(seed, w.j));
        const CMatrix g = random_hermitian_unit(rng, w.sigma.rows());
        const CMatrix moved = project_psd_unit_trace(w.sigma + level * g);
        w.epsilon += trace_norm(w.sigma - moved);
        w.sigma = moved;
    }
    return out;
}

std::vector<CMatrix> mutually_unbiased_bases(int d) {
    if (!is_prime(d)) {
        throw ConfigurationError("mutually unbiased bases are only built for prime d, got " + std::to_string(d));
    }
    std::vector<CMatrix> bases;
    bases.push_back(CMatrix::Identity(d, d));
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    if (d == 2) {
        CMatrix x(2, 2), y(2, 2);
        x << scale, scale, scale, -scale;
        y << scale, scale, Complex(0, scale), Complex(0, -scale);
        bases.push_back(x);
        bases.push_back(y);
        return bases;
    }
    const double angle = 2.0 * std::numbers::pi / d;
    for (int b = 0; b < d; ++b) {
        CMatrix m(d, d);
        for (int a = 0; a < d; ++a) {
            for (int x = 0; x < d; ++x) {
                const int phase = (b * x * x + a * x) % d;
                m(x, a) = std::polar(scale, angle * phase);
            }
        }
        bases.push_back(m);
    }
    return bases;
}

TomographyData sample_measurements(const MpsState &psi, int k, std::int64_t shots, double confidence,
                                   std::uint64_t seed) {
    if (shots <= 0) {
        throw ConfigurationError("sample_measurements: shots must be positive");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw ConfigurationError("sample_measurements: confidence must lie in (0, 1)");
    }
    const int d = psi.d();
    const std::vector<CMatrix> mubs = mutually_unbiased_bases(d);
    TomographyData data = exact_reductions(psi, k);
    data.confidence = confidence;

    const int qudits = 2 * k;
    const std::int64_t settings = ipow(d + 1, qudits);
    const std::int64_t outcomes = ipow(d, qudits);
    const Eigen::Index dim = static_cast<Eigen::Index>(outcomes);

    // Q_{m,a} = Pi_{m,a} - 1/(d+1): summing p(a|m) Q_{m,a} over every basis m inverts the measurement.
    std::vector<std::vector<CMatrix>> q(mubs.size());
    for (std::size_t m = 0; m < mubs.size(); ++m) {
        for (int a = 0; a < d; ++a) {
            const CVector v = mubs[m].col(a);
            q[m].push_back(v * v.adjoint() - CMatrix::Identity(d, d) / static_cast<double>(d + 1));
        }
    }

    const double delta = 1.0 - confidence;
    const double log_outcome_events =
        static_cast<double>(outcomes) * std::numbers::ln2 + std::log1p(-std::exp2(1.0 - static_cast<double>(outcomes)));
    const double t = std::sqrt(2.0 / static_cast<double>(shots) *
                               (std::log(static_cast<double>(settings)) + log_outcome_events - std::log(delta)));
    const double c = std::pow((2.0 * d - 1.0) / (d + 1.0), qudits);
    const double statistical = c * static_cast<double>(settings) * t;

    for (TomographyWindow &w : data.windows) {
        std::mt19937_64 rng(window_seed(seed, w.j));
        const CMatrix &rho = w.sigma;
        CMatrix estimate = CMatrix::Zero(dim, dim);
        std::vector<int> setting(static_cast<std::size_t>(qudits), 0);
        for (std::int64_t sidx = 0; sidx < settings; ++sidx) {
            std::int64_t rest = sidx;
            for (int i = qudits - 1; i >= 0; --i) {
                setting[static_cast<std::size_t>(i)] = static_cast<int>(rest % (d + 1));
                rest /= d + 1;
            }
            CMatrix u = mubs[static_cast<std::size_t>(setting[0])];
            for (int i = 1; i < qudits; ++i) {
                u = kron(u, mubs[static_cast<std::size_t>(setting[static_cast<std::size_t>(i)])]);
            }
            RVector p = (u.adjoint() * rho * u).diagonal().real().cwiseMax(0.0);
            p /= p.sum();
            const std::vector<std::int64_t> counts = multinomial(rng, shots, p);
            for (Eigen::Index x = 0; x < dim; ++x) {
                const std::int64_t cnt = counts[static_cast<std::size_t>(x)];
                if (cnt == 0) {
                    continue;
                }
                std::int64_t digits = x;
                std::vector<int> outcome(static_cast<std::size_t>(qudits));
                for (int i = qudits - 1; i >= 0; --i) {
                    outcome[static_cast<std::size_t>(i)] = static_cast<int>(digits % d);
                    digits /= d;
                }
                CMatrix term = q[static_cast<std::size_t>(setting[0])][static_cast<std::size_t>(outcome[0])];
                for (int i = 1; i < qudits; ++i) {
                    term = kron(term, q[static_cast<std::size_t>(setting[static_cast<std::size_t>(i)])]
                                       [static_cast<std::size_t>(outcome[static_cast<std::size_t>(i)])]);
                }
                estimate += (static_cast<double>(cnt) / static_cast<double>(shots)) * term;
            }
        }
        estimate = hermitian_part(estimate);
        const CMatrix projected = project_psd_unit_trace(estimate);
        w.epsilon = statistical + trace_norm(estimate - projected);
        w.sigma = projected;
    }
    return data;
}

}  // namespace mpscert
