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

"""Python access to the hotspin simulator."""

import json as _json

from . import _hotspin
from ._hotspin import (
    HotspinError,
    avg_from_ent,
    bundled_profile_names,
    chain_log_likelihood,
    clifford_gate_counts,
    clifford_group_size,
    cptp_project,
    experiment_kinds,
    hamiltonian_generator,
    ideal_gate_ptm,
    matrix_exp,
    rb_fidelity,
    simulate_chains,
    stochastic_generator,
    viterbi_path,
)

REPORT_SCHEMA = _hotspin.REPORT_SCHEMA
ERROR_SCHEMA = _hotspin.ERROR_SCHEMA


def bundled_profile(name):
    return _json.loads(_hotspin.bundled_profile(name))


def run(config, base_dir="."):
    """Run one experiment in memory.

    Returns (exit_code, report, raw) where raw maps relative file names to bytes.
    """
    code, report, raw = _hotspin.run_experiment(_json.dumps(config), base_dir)
    return code, _json.loads(report), raw


def execute(config, out_dir, threads=0):
    """Run one experiment and write report.json and raw/ under out_dir."""
    return _hotspin.execute(_json.dumps(config), str(out_dir), threads)


def fit_spam(chains, seed, restarts=10):
    return _json.loads(_hotspin.fit_spam([list(map(int, c)) for c in chains], seed, restarts))


def decompose_channel(ptm):
    return _json.loads(_hotspin.decompose_channel(ptm))


def readout_fidelity(profile, shots, seed):
    return _hotspin.readout_fidelity(profile, shots, seed)


def reproduce_table1(seed, profiles=()):
    return _json.loads(_hotspin.reproduce_table1(seed, list(profiles)))
