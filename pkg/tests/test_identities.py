"""Identity catalogue: scalar addition formulas, exchange relations,
structural checks, heat equations, and the full registry sweep."""

import numpy as np
import pytest

from aybelab import identities as idn
from aybelab.errors import DomainError, SingularityError
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

ids = lambda f: f"{f.kind}-n{f.n}"


@pytest.mark.parametrize("flavor", ["rational", "trigonometric", "elliptic"])
def test_scalar_fay_addition(flavor):
    rng = np.random.default_rng(0)
    worst = 0.0
    done = 0
    while done < 100:
        pts = rng.uniform(0.1, 0.9, size=5) + 1j * rng.uniform(
            0.1, 0.9, size=5
        )
        hb, eta, z1, z2, z3 = pts
        try:
            resid = idn.scalar_fay_residual(
                flavor, hb, eta, z1, z2, z3, tau=1j
            )
        except SingularityError:
            continue  # a difference landed in a pole-exclusion disc
        worst = max(worst, resid)
        done += 1
    assert worst < (1e-10 if flavor == "elliptic" else 1e-12)


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
@pytest.mark.parametrize("kind", ["AYBE", "QYBE", "CYBE"])
def test_yang_baxter_equations(fam, kind):
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(5):
        hb, eta, z1, z2, z3 = idn._sample_points(fam, rng, 5)
        p = {"hbar": hb, "eta": eta, "z1": z1, "z2": z2, "z3": z3}
        worst = max(worst, idn.check_yb(kind, fam, p))
    assert worst < 1e-9


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
def test_structure_checks(fam):
    out = idn.check_structure(fam, samples=5, seed=2)
    for key, val in out.items():
        assert val < 1e-9, f"{key}: {val}"


@pytest.mark.parametrize("n", [2, 3])
def test_heat_equations(n):
    fam = RFamily.elliptic(n, TAU)
    rng = np.random.default_rng(3)
    p = idn._sample_heat(fam, rng)
    out = idn.check_heat(fam, p["hbar"], p["z1"], dtau=p["dtau"])
    assert out["quantum"] < 1e-5
    assert out["classical"] < 1e-5


def test_heat_requires_elliptic():
    with pytest.raises(DomainError):
        idn.check_heat(RFamily.yang(2), 0.3, 0.4)


def test_unknown_identity_name():
    with pytest.raises(DomainError):
        idn.IdentityCase("no-such-identity", RFamily.yang(2), {})


def test_inapplicable_identity_raises():
    case = idn.IdentityCase("m-r-exchange", RFamily.yang(2), {})
    with pytest.raises(DomainError):
        idn.check_identity(case)


def test_catalogue_registry_tags_unique():
    tags = [entry[0] for entry in idn.CATALOGUE.values()]
    assert len(tags) == len(set(tags))


def test_full_catalogue_sweep():
    records = idn.run_catalogue(FAMILIES, samples=4, seed=0)
    fails = [r for r in records if r["status"] == "fail"]
    assert not fails, fails
    # every record resolves to a catalogue anchor
    anchors = {entry[0] for entry in idn.CATALOGUE.values()}
    for r in records:
        assert r["anchor"] in anchors
    # skips are annotated
    for r in records:
        if r["status"] == "skip":
            assert r["note"]


def test_m_identities_skip_for_yang():
    records = idn.run_catalogue(
        [RFamily.yang(2)], names=["m-r-exchange"], samples=1
    )
    assert records[0]["status"] == "skip"
    assert "kernel vanishes" in records[0]["note"]


def test_r0_identities_skip_when_constant_vanishes():
    records = idn.run_catalogue(
        [RFamily.trig7v(0.3)], names=["orbit-projector"], samples=1
    )
    assert records[0]["status"] == "skip"
    assert "kernel vanishes" in records[0]["note"]


def test_catalogue_deterministic():
    a = idn.run_catalogue([RFamily.rat11v()], samples=3, seed=7)
    b = idn.run_catalogue([RFamily.rat11v()], samples=3, seed=7)
    assert a == b


@pytest.mark.parametrize("fam", FAMILIES, ids=ids)
def test_scalar_kernel_pair(fam):
    # (sum of first-order kernels)^2 = sum of second-order kernels on
    # zero-sum triples
    rng = np.random.default_rng(5)
    for _ in range(5):
        z1, z2 = idn._sample_points(fam, rng, 2)
        z3 = -z1 - z2
        lhs = (
            idn.scalar_e1(fam, z1)
            + idn.scalar_e1(fam, z2)
            + idn.scalar_e1(fam, z3)
        ) ** 2
        rhs = (
            idn.scalar_wp(fam, z1)
            + idn.scalar_wp(fam, z2)
            + idn.scalar_wp(fam, z3)
        )
        assert abs(lhs - rhs) < 1e-9
