"""Finite-dimensional models: top and Gaudin Lax pairs, Schlesinger
residuals, and the linear r-matrix structure."""

import numpy as np
import pytest

from aybelab import models_fd as mfd
from aybelab.errors import DomainError
from aybelab.rmat import RFamily

TAU = 0.21 + 0.93j

FAMILIES = [
    RFamily.elliptic(2, TAU),
    RFamily.elliptic(3, TAU),
    RFamily.yang(2),
    RFamily.yang(3),
    RFamily.trig7v(0.3),
    RFamily.rat11v(),
]

POINTS = [0.11 + 0.03j, 0.52 - 0.07j, -0.29 + 0.21j]
Z_PROBES = [0.66 + 0.13j, 0.41 - 0.18j, -0.37 + 0.29j]

ids = lambda f: f"{f.kind}-n{f.n}"


def rand_mat(n, rng):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def gaudin_state(fam, nsites=3, seed=3):
    rng = np.random.default_rng(seed)
    sites = [(POINTS[a], rand_mat(fam.n, rng)) for a in range(nsites)]
    return mfd.GaudinState(sites, fam)


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
def test_contract_residue_normalization(fam):
    # Res_{z=0} L(S, z) = S with the 1/nres normalization
    rng = np.random.default_rng(1)
    S = rand_mat(fam.n, rng)
    eps = 0.08  # just outside the family's pole-exclusion radius
    vals = []
    for th in np.linspace(0, 2 * np.pi, 48, endpoint=False):
        z = eps * np.exp(1j * th)
        vals.append(z * mfd.contract(fam.classical_parts(z)[0], S, fam.nres))
    res = np.mean(vals, axis=0)
    assert np.max(np.abs(res - S)) < 1e-10


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
def test_top_lax_equation(fam):
    rng = np.random.default_rng(2)
    state = mfd.TopState(rand_mat(fam.n, rng), fam)
    worst = max(mfd.top_lax_residual(state, z) for z in Z_PROBES)
    assert worst < 1e-9


def test_top_eom_vanishes_when_m_vanishes():
    fam = RFamily.yang(2)
    rng = np.random.default_rng(4)
    state = mfd.TopState(rand_mat(2, rng), fam)
    assert np.max(np.abs(mfd.top_eom(state))) < 1e-14


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
@pytest.mark.parametrize("flow", [0, 1, 2, 3])
def test_gaudin_lax_equation(fam, flow):
    state = gaudin_state(fam)
    worst = max(mfd.gaudin_lax_residual(state, flow, z) for z in Z_PROBES)
    assert worst < 1e-9


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
def test_gaudin_lax_residue(fam):
    state = gaudin_state(fam)
    eps = 0.08
    vals = []
    for th in np.linspace(0, 2 * np.pi, 48, endpoint=False):
        z = state.points[1] + eps * np.exp(1j * th)
        vals.append((z - state.points[1]) * mfd.gaudin_L(state, z))
    res = np.mean(vals, axis=0)
    assert np.max(np.abs(res - state.mats[1])) < 1e-10


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
@pytest.mark.parametrize("flow", [1, 2, 3])
def test_schlesinger_marked_point_flows(fam, flow):
    state = gaudin_state(fam)
    worst = max(
        mfd.schlesinger_residual(state, flow, z) for z in Z_PROBES
    )
    assert worst < 1e-5


@pytest.mark.parametrize("n", [2, 3])
def test_schlesinger_tau_flow(n):
    fam = RFamily.elliptic(n, TAU)
    state = gaudin_state(fam)
    worst = max(mfd.schlesinger_residual(state, 0, z) for z in Z_PROBES)
    assert worst < 1e-5


def test_schlesinger_tau_flow_needs_elliptic():
    state = gaudin_state(RFamily.yang(2))
    with pytest.raises(DomainError):
        mfd.schlesinger_residual(state, 0, Z_PROBES[0])


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
def test_rstructure(fam):
    state = gaudin_state(fam, nsites=2)
    resid = mfd.rstructure_residual(state, 0.66 + 0.13j, 0.17 - 0.23j)
    assert resid < 1e-9


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
def test_hamiltonian_conservation(fam):
    # each marked-point flow conserves its own Hamiltonian (first order in dt)
    state = gaudin_state(fam)
    dt = 1e-6
    for flow in (1, 2, 3):
        sdot = mfd.gaudin_eom(state, flow)
        plus = state.replace([S + dt * d for S, d in zip(state.mats, sdot)])
        minus = state.replace([S - dt * d for S, d in zip(state.mats, sdot)])
        Hp = mfd.gaudin_hamiltonians(plus)[0][flow - 1]
        Hm = mfd.gaudin_hamiltonians(minus)[0][flow - 1]
        assert abs(Hp - Hm) / (2 * dt) < 1e-6


def test_distinct_marked_points_required():
    fam = RFamily.yang(2)
    rng = np.random.default_rng(6)
    with pytest.raises(DomainError):
        mfd.GaudinState(
            [(0.3, rand_mat(2, rng)), (0.3, rand_mat(2, rng))], fam
        )
