"""Time integration: RK4 stepping, monodromy matrices, conservation
logging, and trajectory export."""

import csv
import logging

import numpy as np
import pytest
from scipy.linalg import expm

from aybelab import evolve as ev
from aybelab import models_2d as m2
from aybelab.errors import DomainError, SingularityError
from aybelab.rmat import RFamily

TAU = 0.21 + 0.93j
POINTS = [0.11 + 0.03j, 0.52 - 0.07j]


def make_state(fam, band=1, k=0.7, m=64, c=1.0, seed=5):
    sites = [
        (za, m2.random_minimal_field(fam.n, m, c=c, band=band, seed=seed + a))
        for a, za in enumerate(POINTS)
    ]
    return m2.FieldState(sites, k, fam, orbit_c=c)


def test_spectral_dx_single_mode():
    x = 2 * np.pi * np.arange(64) / 64
    A = np.array([[0.4, 1.0j], [0.3, -0.4]])
    f = np.sin(2 * x).reshape(-1, 1, 1) * A
    d = ev.spectral_dx(f)
    assert np.max(np.abs(d - 2 * np.cos(2 * x).reshape(-1, 1, 1) * A)) < 1e-12


def test_step_rk4_zero_field_fixed_point():
    fam = RFamily.yang(2)
    st = m2.FieldState([(0.11, np.zeros((16, 2, 2)))], 0.7, fam)
    out, drift = ev.step_rk4(st, ("first", 0), 0.01)
    assert np.max(np.abs(out.fields[0])) < 1e-14
    assert drift == 0.0


def test_step_rk4_rejects_zero_dt():
    st = make_state(RFamily.yang(2))
    with pytest.raises(DomainError):
        ev.step_rk4(st, ("first", 0), 0.0)


def test_rk4_fourth_order():
    st = make_state(RFamily.yang(2))

    def final(dt, steps):
        s = st
        for _ in range(steps):
            s, _ = ev.step_rk4(s, ("first", 0), dt)
        return s

    ref = final(0.000125, 32)
    e1 = max(
        np.max(np.abs(a - b))
        for a, b in zip(final(0.002, 2).fields, ref.fields)
    )
    e2 = max(
        np.max(np.abs(a - b))
        for a, b in zip(final(0.001, 4).fields, ref.fields)
    )
    assert 10.0 < e1 / e2 < 24.0


def test_reversibility():
    st = make_state(RFamily.yang(2))
    fwd, _ = ev.step_rk4(st, ("first", 0), 0.001)
    back, _ = ev.step_rk4(fwd, ("first", 0), -0.001)
    dev = max(
        np.max(np.abs(a - b)) for a, b in zip(back.fields, st.fields)
    )
    assert dev < 1e-9


def test_orbit_drift_warning(caplog):
    st = make_state(RFamily.yang(2), band=2)
    with caplog.at_level(logging.WARNING, logger="aybelab.evolve"):
        _, drift = ev.step_rk4(st, ("first", 0), 0.05)
    assert drift > 1e-6
    assert any("orbit drift" in r.message for r in caplog.records)


def test_monodromy_zero_field_is_identity():
    fam = RFamily.yang(2)
    st = m2.FieldState([(0.11, np.zeros((16, 2, 2)))], 0.7, fam)
    T = ev.monodromy(st, 1.5)
    assert np.max(np.abs(T - np.eye(2))) < 1e-13


def test_monodromy_constant_field():
    fam = RFamily.yang(2)
    A = np.array([[0.3 + 0.1j, 0.2], [0.1, -0.3 - 0.1j]])
    st = m2.FieldState([(0.11 + 0.03j, np.repeat(A[None], 64, axis=0))], 0.7, fam)
    z = 1.3 + 0.4j
    U0 = m2.build_U(st, z)[0]
    T = ev.monodromy(st, z)
    assert np.max(np.abs(T - expm(2 * np.pi * U0 / 0.7))) < 1e-10


def test_monodromy_second_order_in_refinement():
    st = make_state(RFamily.yang(2))
    z = 4.0 + 1.0j
    ref = ev.monodromy(st, z, refine=64)
    e1 = np.max(np.abs(ev.monodromy(st, z, refine=2) - ref))
    e2 = np.max(np.abs(ev.monodromy(st, z, refine=4) - ref))
    assert 3.0 < e1 / e2 < 5.5


def test_monodromy_requires_nonzero_k():
    st = make_state(RFamily.yang(2), k=0.0)
    with pytest.raises(DomainError):
        ev.monodromy(st, 2.0)


@pytest.mark.parametrize("n", [2, 3])
def test_elliptic_monodromy_quasi_periodicity(n):
    fam = RFamily.elliptic(n, TAU)
    st = make_state(fam, k=5.0, seed=7)
    z = 0.31 + 0.4j
    t1 = np.trace(ev.monodromy(st, z, refine=8))
    t2 = np.trace(ev.monodromy(st, z + 1.0, refine=8))
    assert abs(t1 - t2) < 1e-8


def test_sim_config_validation():
    st = make_state(RFamily.yang(2))
    with pytest.raises(DomainError):
        ev.SimConfig(st, ("first", 0), dt=-0.1, steps=10)
    with pytest.raises(DomainError):
        ev.SimConfig(st, ("first", 0), dt=0.1, steps=-1)
    with pytest.raises(SingularityError):
        ev.SimConfig(st, ("first", 0), dt=0.1, steps=1, z_probes=[POINTS[0]])


def test_suggest_dt():
    st = make_state(RFamily.yang(2))
    dt = ev.suggest_dt(st, ("first", 0))
    rhs = m2.eom_2d(st, ("first", 0))
    peak = max(float(np.max(np.abs(r))) for r in rhs)
    assert abs(dt * peak - 0.1) < 1e-12


def test_run_zero_steps_single_snapshot():
    st = make_state(RFamily.yang(2))
    traj = ev.run(ev.SimConfig(st, ("first", 0), dt=0.01, steps=0))
    assert len(traj.snapshots) == 1
    assert traj.snapshots[0][0] == 0.0
    assert not traj.aborted


def test_run_snapshot_count():
    st = make_state(RFamily.yang(2))
    traj = ev.run(
        ev.SimConfig(st, ("first", 0), dt=0.001, steps=10, record_every=3)
    )
    assert len(traj.snapshots) == 10 // 3 + 1


def test_run_conservation():
    st = make_state(RFamily.yang(2))
    probes = [8.0 + 1.0j, -8.0 + 2.0j, 9.6 - 2.0j]
    cfg = ev.SimConfig(
        st,
        ("first", 0),
        dt=0.0005,
        steps=40,
        z_probes=probes,
        record_every=10,
        monodromy_refine=32,
    )
    traj = ev.run(cfg)
    drift = ev.drift_summary(traj)
    trT = max(v for k, v in drift.items() if k[1].startswith("tr_T"))
    trS = max(
        v
        for k, v in drift.items()
        if k[1].startswith("tr_S^2") and not k[1].endswith("spread")
    )
    assert trT < 1e-6
    assert trS < 1e-9


def test_run_nan_abort_keeps_last_good_snapshot():
    st = make_state(RFamily.yang(2), band=2)
    with np.errstate(over="ignore", invalid="ignore"):
        traj = ev.run(ev.SimConfig(st, ("first", 0), dt=1e3, steps=20))
    assert traj.aborted
    assert traj.abort_reason
    assert len(traj.snapshots) >= 1
    for _, snap in traj.snapshots:
        assert all(np.all(np.isfinite(f)) for f in snap.fields)


def test_trajectory_export(tmp_path):
    st = make_state(RFamily.yang(2))
    cfg = ev.SimConfig(
        st, ("first", 0), dt=0.001, steps=4, z_probes=[8.0 + 1.0j],
        record_every=2,
    )
    traj = ev.run(cfg)
    csv_path = tmp_path / "invariants.csv"
    traj.export_csv(csv_path)
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "site", "name", "re", "im"]
    assert len(rows) > 1
    paths = traj.export_snapshots(str(tmp_path / "snap_{t}.json"))
    assert len(paths) == len(traj.snapshots)
    restored = m2.FieldState.loads(open(paths[-1]).read())
    final = traj.snapshots[-1][1]
    for f, g in zip(restored.fields, final.fields):
        assert np.array_equal(f, g)
