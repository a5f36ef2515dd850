# Copyright 2026 The mpscert Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import mpscert


def test_named_states_and_dense_expansion():
    ghz = mpscert.named_state("ghz", 3)
    amps = mpscert.to_dense(ghz)
    expected = np.zeros(8, dtype=complex)
    expected[0] = expected[7] = 1 / math.sqrt(2)
    assert np.allclose(amps, expected)
    aklt = mpscert.named_state("aklt", 6)
    assert aklt.d == 3
    assert aklt.bond_dims == [1, 2, 2, 2, 2, 2, 1]


def test_string_operator_expectation():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    for phi in (0.0, math.pi / 4, math.pi / 2):
        psi = mpscert.named_state("ghz_phase", 4, phi=phi)
        assert abs(mpscert.expectation_product(psi, [x] * 4) - math.cos(phi)) < 1e-10


def test_exact_data_certifies():
    truth = mpscert.random_mps(9, 2, 2, 1)
    data = mpscert.exact_reductions(truth, 3)
    assert data.total_error() == 0.0
    cert = mpscert.certify(mpscert.block(truth, 3), data)
    assert cert.certified
    assert cert.tau <= 1e-10
    assert cert.fidelity_lower_bound == pytest.approx(1.0)


def test_ghz_is_heralded():
    ghz = mpscert.named_state("ghz", 5)
    cert = mpscert.certify(ghz, mpscert.exact_reductions(ghz, 1))
    assert not cert.certified
    assert cert.reason == "gamma-singular"
    assert cert.tau is None


def test_reconstruct_and_bound_is_sound():
    truth = mpscert.named_state("aklt", 6)
    data = mpscert.perturb(mpscert.exact_reductions(truth, 1), 1e-3, 2)
    result = mpscert.reconstruct(data, method="dmrg", bond_dim=2, seed=1)
    assert all(b <= a + 1e-12 for a, b in zip(result.objectives, result.objectives[1:]))
    fidelity = mpscert.exact_fidelity(result.mps, truth)
    assert fidelity > 0.99
    cert = mpscert.certify(result.mps, data, gap="numeric", gap_value=0.3)
    if cert.certified:
        assert cert.fidelity_lower_bound <= fidelity + 1e-8


def test_json_round_trip_and_errors():
    psi = mpscert.random_mps(4, 2, 2, 3)
    back = mpscert.MpsState.from_json(psi.to_json())
    assert back.bond_dims == psi.bond_dims
    data = mpscert.exact_reductions(psi, 1)
    again = mpscert.TomographyData.from_json(data.to_json())
    assert len(again.windows) == 3
    j, sigma, eps = again.windows[0]
    assert j == 0 and sigma.shape == (4, 4) and eps == 0.0
    with pytest.raises(mpscert.ConfigurationError):
        mpscert.exact_reductions(psi, 3)
    with pytest.raises(mpscert.Error):
        mpscert.certify(psi, data, gap="numeric")
