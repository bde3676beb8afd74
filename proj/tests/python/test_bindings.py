# Copyright 2026 The hotspin Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools
import json

import numpy as np
import pytest

hotspin = pytest.importorskip("hotspin")
_h = hotspin._hotspin

P1 = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1.0, -1.0])]
P2 = [np.kron(P1[a], P1[b]) for a, b in itertools.product(range(4), repeat=2)]


def choi(ptm):
    # J = sum_ij R_ij P_i^T (x) P_j / d^2, PSD iff the channel is CP
    j = np.zeros((16, 16), dtype=complex)
    for i in range(16):
        for k in range(16):
            if ptm[i, k] != 0:
                j += ptm[i, k] * np.kron(P2[k].T, P2[i])
    return j / 16


def test_kinds_and_profiles():
    assert len(_h.experiment_kinds()) == 15
    assert set(_h.bundled_profile_names()) == {"1K-0.79T", "0.1K-0.79T"}
    p = hotspin.bundled_profile("1K-0.79T")
    assert p["temperature"] == pytest.approx(1.0)
    assert _h.REPORT_SCHEMA == "hotspin.report/1"


def test_clifford_groups():
    assert _h.clifford_group_size(1) == 24
    assert _h.clifford_group_size(2) == 11520
    one_q, two_q = _h.clifford_gate_counts(2)
    assert two_q == pytest.approx(1.5)
    assert one_q > 0


def test_ideal_ptms_are_orthogonal():
    for name in ["X1(pi/2)", "Z2(pi/2)", "CZ", "DCZ", "CNOT"]:
        r = np.asarray(_h.ideal_gate_ptm(name))
        assert np.allclose(r @ r.T, np.eye(16), atol=1e-12)
        assert r[0, 0] == pytest.approx(1.0)


def test_run_readout_cal():
    code, report, raw = hotspin.run({"kind": "readout-cal", "seed": 4, "shots": 4000})
    assert code == 0
    assert report["schema"] == "hotspin.report/1"
    p = report["payload"]
    assert 0.9 < p["f_charge"] <= 1.0
    assert 0.9 < p["f_even"] <= 1.0
    assert all(k.startswith("raw/") for k in raw)


def test_run_error_codes():
    code, err, _ = hotspin.run({"kind": "nope", "seed": 1})
    assert code == 3 and err["schema"] == "hotspin.error/1"
    code, err, _ = hotspin.run({"kind": "t1", "seed": 1, "profile": "nowhere"})
    assert code == 4


def test_readout_fidelity_matches_seed():
    a = hotspin.readout_fidelity("1K-0.79T", 2000, 8)
    b = hotspin.readout_fidelity("1K-0.79T", 2000, 8)
    assert a == b
    assert 0.5 < a["f_odd"] <= 1.0


def test_fit_spam_recovers_truth():
    truth = dict(p_init_even=0.9, p_read_even=0.95, p_read_odd=0.97, p_even_to_odd=0.01, p_odd_to_even=0.02)
    chains = _h.simulate_chains(**truth, n_chains=3000, n_reads=10, seed=21)
    est = hotspin.fit_spam(chains, seed=3, restarts=4)
    assert est["P_init,even"]["value"] == pytest.approx(0.9, abs=0.03)
    assert est["P_read,even"]["value"] == pytest.approx(0.95, abs=0.03)
    assert est["P_read,odd"]["value"] == pytest.approx(0.97, abs=0.03)
    assert est["P_init,even"]["value"] + est["P_init,odd"]["value"] == pytest.approx(1.0)
    model = json.dumps(est["model"])
    ll = _h.chain_log_likelihood(model, chains[0])
    assert ll < 0
    assert len(_h.viterbi_path(model, chains[0])) == len(chains[0])


def test_decompose_zz_rotation():
    g = 0.05 * np.asarray(_h.hamiltonian_generator(15))
    d = hotspin.decompose_channel(_h.matrix_exp(g))
    assert d["hamiltonian"]["ZZ"] == pytest.approx(0.05, abs=1e-9)
    others = [v for k, v in d["hamiltonian"].items() if k != "ZZ"]
    assert max(map(abs, others)) < 1e-9
    assert max(map(abs, d["stochastic"].values())) < 1e-9


def test_stochastic_generator_is_cptp():
    r = np.asarray(_h.matrix_exp(0.02 * np.asarray(_h.stochastic_generator(5))))
    assert np.linalg.eigvalsh(choi(r)).min() > -1e-12


def test_cptp_project_fixes_non_cp_map():
    rng = np.random.default_rng(0)
    r = np.eye(16)
    r[1:, 1:] += 0.2 * rng.standard_normal((15, 15))
    assert np.linalg.eigvalsh(choi(r)).min() < -1e-3
    q = np.asarray(_h.cptp_project(r))
    j = choi(q)
    assert np.linalg.eigvalsh(j).min() > -1e-8
    # trace preservation: first PTM row is (1, 0, ..., 0)
    assert np.allclose(q[0], np.eye(16)[0], atol=1e-8)
    # a valid channel is a fixed point
    good = np.asarray(_h.matrix_exp(0.05 * np.asarray(_h.hamiltonian_generator(3))))
    assert np.allclose(_h.cptp_project(good), good, atol=1e-8)


def test_rb_fidelity_and_entanglement_fidelity():
    assert _h.rb_fidelity(0.01, 1) == pytest.approx(0.995)
    assert _h.rb_fidelity(0.01, 2) == pytest.approx(0.9925)
    assert _h.avg_from_ent(0.995, 4) == pytest.approx((4 * 0.995 + 1) / 5)
