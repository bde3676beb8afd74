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

import json
import os
import pathlib
import subprocess
import sys

import jsonschema
import pytest

ROOT = pathlib.Path(os.environ.get("HOTSPIN_ROOT", pathlib.Path(__file__).resolve().parents[2]))
CLI = os.environ.get("HOTSPIN_CLI", str(ROOT / "build" / "hotspin"))

REPORT_SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())
ERROR_SCHEMA = json.loads((ROOT / "docs" / "error.schema.json").read_text())

pytestmark = pytest.mark.skipif(not pathlib.Path(CLI).exists(), reason="hotspin binary not built")


def run_cli(tmp_path, cfg, *extra):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return subprocess.run([CLI, "--config", str(path), *extra],
                          capture_output=True, text=True, timeout=900)


def load_report(out):
    report = json.loads((pathlib.Path(out) / "report.json").read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    return report


def test_list_kinds():
    p = subprocess.run([CLI, "--list-kinds"], capture_output=True, text=True)
    assert p.returncode == 0
    kinds = p.stdout.split()
    assert "rb-2q" in kinds and "hmm-fit" in kinds and len(kinds) == 15


def test_rb_1q_is_byte_identical(tmp_path):
    cfg = {"kind": "rb-1q", "seed": 7, "shots": 20,
           "params": {"lengths": [1, 2, 4, 8, 16, 32], "sequences": 4}}
    a, b = tmp_path / "a", tmp_path / "b"
    ra = run_cli(tmp_path, cfg, "--out", str(a))
    rb = run_cli(tmp_path, cfg, "--out", str(b))
    assert ra.returncode == 0, ra.stderr
    assert rb.returncode == 0, rb.stderr
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    report = load_report(a)
    for f in report["raw_files"]:
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_seed_flag_changes_output(tmp_path):
    cfg = {"kind": "t1", "seed": 1, "shots": 40}
    run_cli(tmp_path, cfg, "--out", str(tmp_path / "a"))
    run_cli(tmp_path, cfg, "--out", str(tmp_path / "b"), "--seed", "2")
    a = load_report(tmp_path / "a")
    b = load_report(tmp_path / "b")
    assert b["config"]["seed"] == 2
    assert a["payload"]["p_blockade"] != b["payload"]["p_blockade"]


def test_validation_error_exit_2(tmp_path):
    out = tmp_path / "o"
    p = run_cli(tmp_path, {"kind": "init", "seed": 1, "params": {"max_iterations": 0}}, "--out", str(out))
    assert p.returncode == 2
    err = json.loads(p.stderr)
    jsonschema.validate(err, ERROR_SCHEMA)
    assert err["exit_code"] == 2
    jsonschema.validate(json.loads((out / "error.json").read_text()), ERROR_SCHEMA)
    assert not (out / "report.json").exists()


def test_unknown_key_rejected(tmp_path):
    p = run_cli(tmp_path, {"kind": "t1", "seed": 1, "colour": "blue"}, "--out", str(tmp_path / "o"))
    assert p.returncode == 2


def test_missing_seed_rejected(tmp_path):
    p = run_cli(tmp_path, {"kind": "t1"}, "--out", str(tmp_path / "o"))
    assert p.returncode == 2


def test_unknown_kind_exit_3(tmp_path):
    p = run_cli(tmp_path, {"kind": "gst", "seed": 1}, "--out", str(tmp_path / "o"))
    assert p.returncode == 3
    assert json.loads(p.stderr)["exit_code"] == 3


def test_bad_profile_exit_4(tmp_path):
    p = run_cli(tmp_path, {"kind": "t1", "seed": 1, "profile": "4K-9T"}, "--out", str(tmp_path / "o"))
    assert p.returncode == 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "broken", "temperature": -1}))
    p = run_cli(tmp_path, {"kind": "t1", "seed": 1}, "--out", str(tmp_path / "o2"), "--profile", str(bad))
    assert p.returncode == 4


def test_profile_file_matches_bundled(tmp_path):
    cfg = {"kind": "t1", "seed": 3, "shots": 30}
    run_cli(tmp_path, cfg, "--out", str(tmp_path / "a"), "--profile", "1K-0.79T")
    run_cli(tmp_path, cfg, "--out", str(tmp_path / "b"), "--profile", str(ROOT / "profiles" / "1K-0.79T.json"))
    a = load_report(tmp_path / "a")
    b = load_report(tmp_path / "b")
    assert a["payload"] == b["payload"]


def test_locked_out_dir_exit_7(tmp_path):
    out = tmp_path / "o"
    out.mkdir()
    (out / ".lock").write_text("")
    p = run_cli(tmp_path, {"kind": "t1", "seed": 1, "shots": 20}, "--out", str(out))
    assert p.returncode == 7


def test_rb_2q_then_fbt(tmp_path):
    rb = tmp_path / "rb"
    p = run_cli(tmp_path, {"kind": "rb-2q", "seed": 11, "shots": 20,
                           "params": {"lengths": [1, 2, 4, 8], "sequences": 40}},
                "--out", str(rb))
    assert p.returncode in (0, 5), p.stderr
    report = load_report(rb)
    assert "raw/rb_sequences.json" in report["raw_files"]
    assert "raw/rb_outcomes.jsonl" in report["raw_files"]

    fb = tmp_path / "fbt"
    p = run_cli(tmp_path, {"kind": "fbt", "seed": 11, "params": {"source": str(rb)}}, "--out", str(fb))
    assert p.returncode == 0, p.stderr
    fbt = load_report(fb)
    gates = {g["gate"]: g for g in fbt["payload"]["gates"]}
    assert "DCZ" in gates
    for g in gates.values():
        assert 0.5 < g["f_avg"] <= 1.0 + 1e-9
        assert g["f_avg_err"] >= 0


def test_config_relative_source(tmp_path):
    # params.source resolves against the config file's directory
    rb = tmp_path / "rb"
    p = run_cli(tmp_path, {"kind": "rb-2q", "seed": 5, "shots": 10,
                           "params": {"lengths": [1, 2, 4, 8], "sequences": 30}}, "--out", str(rb))
    assert p.returncode in (0, 5), p.stderr
    sub = tmp_path / "cfgdir"
    sub.mkdir()
    (sub / "fbt.json").write_text(json.dumps({"kind": "fbt", "seed": 5, "params": {"source": "../rb"}}))
    p = subprocess.run([CLI, "--config", str(sub / "fbt.json"), "--out", str(tmp_path / "f")],
                       capture_output=True, text=True, timeout=900)
    assert p.returncode == 0, p.stderr
    load_report(tmp_path / "f")


def test_timing_flag(tmp_path):
    cfg = {"kind": "readout-cal", "seed": 1, "shots": 2000}
    run_cli(tmp_path, cfg, "--out", str(tmp_path / "a"))
    run_cli(tmp_path, cfg, "--out", str(tmp_path / "b"), "--timing")
    assert "wall_time_s" not in load_report(tmp_path / "a")
    assert load_report(tmp_path / "b")["wall_time_s"] >= 0


def test_python_module_cli(tmp_path):
    # same report through the bindings when the module is importable
    hotspin = pytest.importorskip("hotspin")
    cfg = {"kind": "t1", "seed": 9, "shots": 25}
    run_cli(tmp_path, cfg, "--out", str(tmp_path / "c"))
    code, report, _ = hotspin.run(cfg)
    assert code == 0
    assert report == load_report(tmp_path / "c")
