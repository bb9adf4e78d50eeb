"""Command-line driver: suites, exit codes, report determinism, and the
simulation workflow."""

import json

import numpy as np
import pytest

from aybelab import cli
from aybelab import models_2d as m2
from aybelab.rmat import RFamily


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_single_suite_passes(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--suite", "fay", "--samples", "10"
    )
    assert code == 0
    assert "fay-addition" in out
    assert "fail" not in out.replace("0 failed", "")


def test_verify_unknown_suite_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify", "--suite", "nonexistent")
    assert code == 2
    assert "unknown suite" in err


def test_verify_family_restriction(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify",
        "--suite",
        "aybe",
        "--family",
        "elliptic",
        "--n",
        "2",
        "--samples",
        "3",
        "--seed",
        "7",
    )
    assert code == 0
    assert "elliptic-n2" in out
    assert "yang" not in out


def test_verify_yang_m_identities_skip(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify",
        "--suite",
        "identities",
        "--family",
        "yang",
        "--samples",
        "2",
    )
    assert code == 0
    assert "kernel vanishes" in out


def test_verify_json_reports_deterministic(capsys):
    argv = [
        "verify",
        "--suite",
        "aybe",
        "--family",
        "rat11v",
        "--samples",
        "4",
        "--seed",
        "11",
        "--format",
        "json",
    ]
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_records_carry_registry_anchors(capsys):
    from aybelab import identities as idn

    code, out, _ = run_cli(
        capsys,
        "verify",
        "--suite",
        "structure",
        "--family",
        "rat11v",
        "--format",
        "json",
        "--samples",
        "3",
    )
    assert code == 0
    report = json.loads(out)
    anchors = {tag for tag, _ in idn.registry().values()}
    for rec in report["records"]:
        assert rec["anchor"] in anchors


def test_verify_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("AYBE_LAB_SEED", "42")
    code, out, _ = run_cli(
        capsys,
        "verify",
        "--suite",
        "fay",
        "--samples",
        "3",
        "--format",
        "json",
    )
    assert code == 0
    assert json.loads(out)["seed"] == 42


def _write_demo_config(path, dt=0.001, steps=4, refine=8):
    fam = RFamily.yang(2)
    pts = [0.11 + 0.03j, 0.52 - 0.07j]
    sites = [
        (za, m2.random_minimal_field(2, 32, c=1.0, band=1, seed=5 + a))
        for a, za in enumerate(pts)
    ]
    st = m2.FieldState(sites, 0.7, fam, orbit_c=1.0)
    doc = {
        "state": st.to_json(),
        "flow": ["first", 0],
        "dt": dt,
        "steps": steps,
        "z_probes": [[8.0, 1.0]],
        "record_every": 2,
        "monodromy_refine": refine,
    }
    path.write_text(json.dumps(doc))
    return doc


def test_simulate_demo_config(capsys, tmp_path):
    cfg = tmp_path / "demo.json"
    _write_demo_config(cfg)
    out_dir = tmp_path / "out"
    code, out, _ = run_cli(
        capsys, "simulate", "--config", str(cfg), "--out", str(out_dir)
    )
    assert code == 0
    assert "pre-check" in out
    assert (out_dir / "invariants.csv").exists()
    assert any(out_dir.glob("snapshot_t*.json"))


def test_simulate_zero_steps(capsys, tmp_path):
    cfg = tmp_path / "demo.json"
    _write_demo_config(cfg, steps=0)
    out_dir = tmp_path / "out"
    code, out, _ = run_cli(
        capsys, "simulate", "--config", str(cfg), "--out", str(out_dir)
    )
    assert code == 0
    assert "1 snapshots" in out


def test_simulate_missing_config(capsys):
    code, _, err = run_cli(capsys, "simulate", "--config", "/no/such/file")
    assert code == 2
    assert "cannot load config" in err


def test_simulate_malformed_config(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    code, _, err = run_cli(capsys, "simulate", "--config", str(cfg))
    assert code == 2


def test_simulate_precheck_rejects_wrong_reading(capsys, tmp_path):
    # the rejected index reading of the second flow does not solve the
    # zero-curvature equation; the pre-check must stop the run
    cfg = tmp_path / "demo.json"
    doc = _write_demo_config(cfg)
    doc["flow"] = ["second", 0]
    doc["readings"] = {"inner_index": "ab"}
    cfg.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "simulate", "--config", str(cfg))
    assert code == 1
    assert "pre-check failed" in err


def test_probe_quantum_kernel(capsys):
    code, out, _ = run_cli(
        capsys, "probe", "--family", "yang", "--n", "2", "--R", "0.7", "1.3"
    )
    assert code == 0
    assert "R(hbar=" in out
    assert "F(hbar=" in out


def test_probe_singular_point_named(capsys):
    code, _, err = run_cli(
        capsys, "probe", "--family", "yang", "--n", "2", "--R", "0.0", "1.3"
    )
    assert code == 1
    assert "singular" in err


def test_expand_prints_kernels(capsys):
    code, out, _ = run_cli(
        capsys, "expand", "--family", "rat11v", "--z", "0.4"
    )
    assert code == 0
    for label in ("r(", "m(", "r0", "m(0)", "dr(", "dm("):
        assert label in out


def test_expand_singular_point(capsys):
    code, _, err = run_cli(
        capsys, "expand", "--family", "rat11v", "--z", "0.001"
    )
    assert code == 1
    assert "singular" in err


def test_no_command_prints_help(capsys):
    code, out, _ = run_cli(capsys)
    assert code == 2
    assert "usage" in out.lower()
