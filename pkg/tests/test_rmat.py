"""R-matrix families: exchange relations, expansions, unitarity, residues."""

import numpy as np
import pytest

from aybelab import rmat, specfn
from aybelab.errors import DomainError, NonUnitaryError, SingularityError
from aybelab.rmat import RFamily
from aybelab.tensor import leg_embed, permutation_P

TAU = 0.21 + 0.93j

FAMILIES = [
    RFamily.elliptic(2, TAU),
    RFamily.elliptic(3, TAU),
    RFamily.yang(2),
    RFamily.yang(3),
    RFamily.trig7v(0.3),
    RFamily.rat11v(),
]

PTS = (0.23 + 0.11j, 0.57 - 0.09j, 0.13 + 0.21j, -0.31 + 0.04j, 0.44 - 0.17j)


def aybe_residual(fam, hb, eta, z1, z2, z3):
    R = fam.eval_R
    emb = lambda op, i, j: leg_embed(op, [i, j], 3)
    z12, z23, z13 = z1 - z2, z2 - z3, z1 - z3
    lhs = emb(R(hb, z12), 1, 2) @ emb(R(eta, z23), 2, 3)
    rhs = emb(R(eta, z13), 1, 3) @ emb(R(hb - eta, z12), 1, 2) + emb(
        R(eta - hb, z23), 2, 3
    ) @ emb(R(hb, z13), 1, 3)
    return (lhs - rhs).norm()


def qybe_residual(fam, hb, z1, z2, z3):
    R = fam.eval_R
    emb = lambda op, i, j: leg_embed(op, [i, j], 3)
    z12, z23, z13 = z1 - z2, z2 - z3, z1 - z3
    lhs = emb(R(hb, z12), 1, 2) @ emb(R(hb, z13), 1, 3) @ emb(R(hb, z23), 2, 3)
    rhs = emb(R(hb, z23), 2, 3) @ emb(R(hb, z13), 1, 3) @ emb(R(hb, z12), 1, 2)
    return (lhs - rhs).norm()


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_associative_exchange_relation(fam):
    assert aybe_residual(fam, *PTS) < 1e-11


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_quantum_exchange_relation(fam):
    assert qybe_residual(fam, PTS[0], *PTS[2:]) < 1e-11


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_skew_symmetry(fam):
    hb, z = 0.27 + 0.06j, 0.38 - 0.13j
    resid = (fam.eval_R(hb, z) + fam.eval_R(-hb, -z).swap()).norm()
    assert resid < 1e-12


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_hbar_residue_is_identity(fam):
    res = rmat.residue_quadrature(
        lambda h: fam.eval_R(h, 0.37 - 0.11j, hbar_radius=0.001), 0.0, radius=0.02
    )
    assert (res - rmat.identity_op(fam.n, 2)).norm() < 1e-10


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_unitarity(fam):
    hb, z = 0.27 + 0.06j, 0.38 - 0.13j
    f, resid = rmat.unitarity_scalar(fam, hb, z)
    assert resid < 1e-10
    assert abs(f) > 1.0e-6


def test_unitarity_rejects_corrupted_R():
    fam = RFamily.yang(2)

    class Broken:
        kind = "yang"
        n = 2

        def eval_R(self, h, z):
            out = fam.eval_R(h, z)
            out.mat[0, 1] += 0.1
            return out

    with pytest.raises(NonUnitaryError):
        rmat.unitarity_scalar(Broken(), 0.3, 0.4)


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_oracle_matches_closed_forms_or_is_stable(fam):
    z = 0.38 - 0.13j
    ro, mo = fam.expansion_oracle(z)
    if fam.kind in ("elliptic", "yang"):
        rc, mc = fam.classical_parts(z)
        assert (ro - rc).norm() < 1e-6
        assert (mo - mc).norm() < 1e-5


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_classical_coefficient_symmetries(fam):
    z = 0.38 - 0.13j
    r1, m1 = fam.classical_parts(z)
    r2, m2 = fam.classical_parts(-z)
    assert (r1 + r2.swap()).norm() < 1e-8
    assert (m1 - m2.swap()).norm() < 1e-8


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_r_residue_at_zero(fam):
    res = rmat.residue_quadrature(
        lambda w: fam.classical_parts(w, z_radius=0.005)[0], 0.0, radius=0.02
    )
    assert (res - fam.nres * permutation_P(fam.n)).norm() < 1e-9


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_constant_parts_symmetries(fam):
    r0, m0 = fam.constant_parts()
    assert (r0 + r0.swap()).norm() < 1e-9
    assert (m0 - m0.swap()).norm() < 1e-9


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind}-n{f.n}")
def test_constant_parts_match_series(fam):
    # r(z) - nres P / z -> r0 and m(z) -> m0 as z -> 0
    r0, m0 = fam.constant_parts()
    p = permutation_P(fam.n)
    z0 = 0.02

    def excess(z):
        r, _ = fam.classical_parts(z, z_radius=0.004)
        return r - (fam.nres / z) * p

    def even_m(z):
        return 0.5 * (
            fam.classical_parts(z, z_radius=0.004)[1]
            + fam.classical_parts(-z, z_radius=0.004)[1]
        )

    # symmetrized estimates have O(z^2) error; extrapolate it away
    r_lim = (1.0 / 3.0) * (
        4.0 * 0.5 * (excess(z0 / 2) + excess(-z0 / 2)) - 0.5 * (excess(z0) + excess(-z0))
    )
    m_lim = (1.0 / 3.0) * (4.0 * even_m(z0 / 2) - even_m(z0))
    assert (r_lim - r0).norm() < 1e-4
    assert (m_lim - m0).norm() < 1e-4


def test_unitarity_normalization_detection():
    expected = {
        ("elliptic", 2): "N^2 phi(N hbar, z) phi(N hbar, -z)",
        ("elliptic", 3): "N^2 phi(N hbar, z) phi(N hbar, -z)",
        ("yang", 2): "phi(hbar, z) phi(hbar, -z)",
        ("yang", 3): "phi(hbar, z) phi(hbar, -z)",
        ("trig7v", 2): "phi_sinh(hbar, z) phi_sinh(hbar, -z)",
        ("rat11v", 2): "phi(hbar, z) phi(hbar, -z)",
    }
    for fam in FAMILIES:
        best, dev = rmat.detect_unitarity_normalization(fam, samples=6)
        assert best == expected[(fam.kind, fam.n)]
        assert dev < 1e-10


def test_rat11v_degenerates_to_yang():
    # eps * R^{eps*hbar}(eps*z) -> Yang R^hbar(z) as eps -> 0
    fam = RFamily.rat11v()
    yang = RFamily.yang(2)
    hb, z = 0.31 + 0.05j, 0.44 - 0.12j
    target = yang.eval_R(hb, z)
    for eps, tol in ((1e-2, 1e-3), (1e-3, 1e-5)):
        scaled = eps * fam.eval_R(
            eps * hb, eps * z, hbar_radius=1e-8, z_radius=1e-8
        )
        assert (scaled - target).norm() < tol


def test_dr_dm_match_finite_difference():
    h = 1e-4
    for fam in FAMILIES:
        z = 0.41 - 0.17j
        dr = fam.dr(z)
        dm = fam.dm(z)
        rp, mp = fam.classical_parts(z + h)
        rm, mm = fam.classical_parts(z - h)
        assert (dr - (1.0 / (2 * h)) * (rp - rm)).norm() < 1e-5
        assert (dm - (1.0 / (2 * h)) * (mp - mm)).norm() < 1e-4


def test_singularity_exclusion():
    fam = RFamily.elliptic(2, TAU)
    with pytest.raises(SingularityError):
        fam.eval_R(0.3, 0.01)
    with pytest.raises(SingularityError):
        fam.eval_R(0.001, 0.3)
    with pytest.raises(SingularityError):
        RFamily.yang(2).eval_R(0.3, 1e-4)
    with pytest.raises(SingularityError):
        RFamily.trig7v().eval_R(0.3, np.pi * 1j + 1e-4)


def test_family_validation():
    with pytest.raises(DomainError):
        RFamily("unknown")
    with pytest.raises(DomainError):
        RFamily.elliptic(2, 0.3 - 0.1j)
    with pytest.raises(DomainError):
        RFamily("trig7v", n=3)


def test_descriptor_round_trip():
    for fam in FAMILIES:
        d = fam.descriptor()
        back = RFamily.from_descriptor(d)
        assert back.kind == fam.kind and back.n == fam.n
        z, hb = 0.33 - 0.08j, 0.21 + 0.04j
        assert (back.eval_R(hb, z) - fam.eval_R(hb, z)).norm() < 1e-14
