"""The four quantum R-matrix families and their quasi-classical expansion data.

Families
--------
  elliptic(n, tau) -- Baxter-Belavin family built on the T-basis
  trig7v(lam)      -- 7-vertex trigonometric deformation of the 6-vertex XXZ
  rat11v()         -- 11-vertex rational deformation of Yang's R-matrix
  yang(n)          -- rational R = 1/hbar + P/z

Each family evaluates R^hbar(z) on two tensor legs and exposes the expansion
coefficients r(z), m(z), r0, m(0) of

    R^hbar(z) = 1/hbar + r(z) + hbar m(z) + O(hbar^2),
    r(z) = nres * P / z + r0 + O(z).

The elliptic family carries closed forms for all coefficients; the trig7v and
rat11v coefficients are produced by the Richardson limit-extraction oracle and
memoized, since no closed expansion is trusted for them.
"""

import numpy as np

from . import specfn
from .errors import DomainError, InstabilityError, NonUnitaryError, SingularityError
from .tensor import TensorOp, belavin_T, identity_op, permutation_P

# Base steps for limit extraction.  Richardson extrapolation leaves a
# truncation error that shrinks with the step while the theta-series
# rounding floor grows like 1/step^2; these values sit near the optimum
# of that trade-off (deviations ~1e-8 against the elliptic closed forms).
ORACLE_H = 4e-3   # base Planck-constant step
ORACLE_Z = 0.0125  # base spectral step for the z -> 0 limits


class ExpansionCoeffs:
    """Evaluators and constants of the quasi-classical expansion."""

    def __init__(self, r, m, r0, m0):
        self.r = r
        self.m = m
        self.r0 = r0
        self.m0 = m0


class RFamily:
    """Descriptor plus evaluator for one R-matrix family."""

    def __init__(self, kind, n=2, tau=None, lam=None):
        if kind not in ("elliptic", "trig7v", "rat11v", "yang"):
            raise DomainError(f"unknown R-matrix family {kind!r}")
        if kind == "elliptic":
            if tau is None:
                raise DomainError("elliptic family requires a modulus tau")
            tau = complex(tau)
            if tau.imag <= 0:
                raise DomainError("elliptic family requires Im(tau) > 0")
        if kind in ("trig7v", "rat11v") and n != 2:
            raise DomainError(f"{kind} family is defined for n = 2")
        if kind == "trig7v":
            lam = complex(0.0 if lam is None else lam)
            if not np.isfinite(lam.real) or not np.isfinite(lam.imag):
                raise DomainError("trig7v deformation parameter must be finite")
        self.kind = kind
        self.n = int(n)
        self.tau = tau
        self.lam = lam
        self._cache = {}

    # -- constructors -----------------------------------------------------
    @classmethod
    def elliptic(cls, n, tau):
        return cls("elliptic", n=n, tau=tau)

    @classmethod
    def trig7v(cls, lam=0.0):
        return cls("trig7v", n=2, lam=lam)

    @classmethod
    def rat11v(cls):
        return cls("rat11v", n=2)

    @classmethod
    def yang(cls, n):
        return cls("yang", n=n)

    def __repr__(self):
        if self.kind == "elliptic":
            return f"RFamily.elliptic(n={self.n}, tau={self.tau})"
        if self.kind == "trig7v":
            return f"RFamily.trig7v(lam={self.lam})"
        return f"RFamily.{self.kind}(n={self.n})" if self.kind == "yang" else "RFamily.rat11v()"

    def descriptor(self):
        d = {"kind": self.kind, "n": self.n}
        if self.kind == "elliptic":
            d["tau"] = [self.tau.real, self.tau.imag]
        if self.kind == "trig7v":
            d["lambda"] = [self.lam.real, self.lam.imag]
        return d

    @classmethod
    def from_descriptor(cls, d):
        kind = d["kind"]
        if kind == "elliptic":
            return cls.elliptic(d["n"], complex(*d["tau"]))
        if kind == "trig7v":
            return cls.trig7v(complex(*d["lambda"]))
        if kind == "rat11v":
            return cls.rat11v()
        return cls.yang(d["n"])

    # -- singular sets ----------------------------------------------------
    def z_pole_dist(self, z):
        """Distance of z from the z-singular set of the family."""
        z = complex(z)
        if self.kind == "elliptic":
            return specfn.lattice_dist(z, self.tau)
        if self.kind == "trig7v":
            w = z / (1j * np.pi)
            return np.pi * abs(w - round(w.real))
        return abs(z)

    def hbar_pole_dist(self, hbar):
        hbar = complex(hbar)
        if self.kind == "elliptic":
            # poles of phi(z, w_a + hbar) over all shifts w_a = (a1 + a2*tau)/n
            best = np.inf
            for _, omega, _ in self._ell_terms():
                best = min(best, specfn.lattice_dist(hbar + omega, self.tau))
            return best
        return self.z_pole_dist(hbar)

    def _require(self, dist, what, radius=specfn.POLE_RADIUS):
        if dist < radius:
            raise SingularityError(f"{self.kind}: {what} within {radius} of the singular set")

    # -- elliptic machinery -----------------------------------------------
    def _ell_terms(self):
        """Cached list of (T_a (x) T_{-a}, omega_a, a2) over the n^2 index pairs."""
        key = "ell_terms"
        if key not in self._cache:
            n = self.n
            terms = []
            for a1 in range(n):
                for a2 in range(n):
                    ta = belavin_T(n, a1, a2)
                    tma = belavin_T(n, -a1, -a2)
                    terms.append((np.kron(ta, tma), (a1 + a2 * self.tau) / n, a2))
            self._cache[key] = terms
        return self._cache[key]

    # -- quantum R --------------------------------------------------------
    def eval_R(self, hbar, z, hbar_radius=None, z_radius=None):
        """R^hbar_12(z) as a 2-leg TensorOp.

        hbar_radius / z_radius override the pole-exclusion radius in the
        corresponding argument; the expansion oracle and residue quadratures
        pass small values to probe limits near the singular set.
        """
        hbar = complex(hbar)
        z = complex(z)
        n = self.n
        hr = specfn.POLE_RADIUS if hbar_radius is None else hbar_radius
        zr = specfn.POLE_RADIUS if z_radius is None else z_radius
        if self.kind == "elliptic":
            self._require(self.z_pole_dist(z), "z", radius=zr)
            self._require(self.hbar_pole_dist(hbar), "hbar", radius=hr)
            acc = np.zeros((n * n, n * n), dtype=complex)
            for tt, omega, a2 in self._ell_terms():
                coef = np.exp(2j * np.pi * a2 * z / n) * specfn.kronecker_phi(
                    "elliptic", z, omega + hbar, tau=self.tau, radius=min(hr, zr) / 2
                )
                acc = acc + coef * tt
            return TensorOp(n, 2, acc)
        if self.kind == "yang":
            self._require(abs(z), "z", radius=zr)
            self._require(abs(hbar), "hbar", radius=hr)
            return (1.0 / hbar) * identity_op(n, 2) + (1.0 / z) * permutation_P(n)
        if self.kind == "trig7v":
            self._require(self.z_pole_dist(z), "z", radius=zr)
            self._require(self.z_pole_dist(hbar), "hbar", radius=hr)
            cothz, cothh = _coth(z), _coth(hbar)
            mat = np.array(
                [
                    [cothz + cothh, 0, 0, 0],
                    [0, 1.0 / np.sinh(hbar), 1.0 / np.sinh(z), 0],
                    [0, 1.0 / np.sinh(z), 1.0 / np.sinh(hbar), 0],
                    [-4.0 * np.exp(-2.0 * self.lam) * np.sinh(z + hbar), 0, 0, cothz + cothh],
                ],
                dtype=complex,
            )
            return TensorOp(2, 2, mat)
        # rat11v
        self._require(abs(z), "z", radius=zr)
        self._require(abs(hbar), "hbar", radius=hr)
        d = 1.0 / hbar + 1.0 / z
        mat = np.array(
            [
                [d, 0, 0, 0],
                [-z - hbar, 1.0 / hbar, 1.0 / z, 0],
                [-z - hbar, 1.0 / z, 1.0 / hbar, 0],
                [-(z**3) - hbar**3 - 2.0 * z**2 * hbar - 2.0 * z * hbar**2, z + hbar, z + hbar, d],
            ],
            dtype=complex,
        )
        return TensorOp(2, 2, mat)

    # -- classical expansion ----------------------------------------------
    @property
    def nres(self):
        """Coefficient of P/z in r(z): n for the elliptic family, 1 otherwise."""
        return self.n if self.kind == "elliptic" else 1

    def classical_parts(self, z, z_radius=None):
        """(r(z), m(z)) in closed form.

        z_radius overrides the pole-exclusion radius in z, for residue
        quadratures on small circles around z = 0.
        """
        z = complex(z)
        n = self.n
        zr = specfn.POLE_RADIUS if z_radius is None else z_radius
        if self.kind == "elliptic":
            self._require(self.z_pole_dist(z), "z", radius=zr)
            e1 = specfn.eisenstein("E1", z, self.tau, radius=zr / 2)
            rho = specfn.eisenstein("rho", z, self.tau, radius=zr / 2)
            racc = e1 * np.eye(n * n, dtype=complex)
            macc = rho * np.eye(n * n, dtype=complex)
            for tt, omega, a2 in self._ell_terms():
                if omega == 0:
                    continue
                ph = np.exp(2j * np.pi * a2 * z / n)
                racc = racc + ph * specfn.kronecker_phi("elliptic", z, omega, tau=self.tau, radius=zr / 2) * tt
                macc = macc + ph * specfn.phi_partial("elliptic", z, omega, tau=self.tau, radius=zr / 2) * tt
            return TensorOp(n, 2, racc), TensorOp(n, 2, macc)
        if self.kind == "yang":
            self._require(abs(z), "z", radius=zr)
            r = (1.0 / z) * permutation_P(n)
            m = TensorOp(n, 2, np.zeros((n * n, n * n)))
            return r, m
        if self.kind == "trig7v":
            self._require(self.z_pole_dist(z), "z", radius=zr)
            s, c = np.sinh(z), np.cosh(z)
            e = -4.0 * np.exp(-2.0 * self.lam)
            r = np.zeros((4, 4), dtype=complex)
            m = np.zeros((4, 4), dtype=complex)
            r[0, 0] = r[3, 3] = c / s
            r[1, 2] = r[2, 1] = 1.0 / s
            r[3, 0] = e * s
            m[0, 0] = m[3, 3] = 1.0 / 3.0
            m[1, 1] = m[2, 2] = -1.0 / 6.0
            m[3, 0] = e * c
            return TensorOp(2, 2, r), TensorOp(2, 2, m)
        # rat11v
        self._require(abs(z), "z", radius=zr)
        r = np.zeros((4, 4), dtype=complex)
        m = np.zeros((4, 4), dtype=complex)
        r[0, 0] = r[3, 3] = r[1, 2] = r[2, 1] = 1.0 / z
        r[1, 0] = r[2, 0] = -z
        r[3, 0] = -(z**3)
        r[3, 1] = r[3, 2] = z
        m[1, 0] = m[2, 0] = -1.0
        m[3, 0] = -2.0 * z**2
        m[3, 1] = m[3, 2] = 1.0
        return TensorOp(2, 2, r), TensorOp(2, 2, m)

    def constant_parts(self):
        """(r0, m(0)) -- the z-expansion constant of r, and m at z = 0."""
        key = "const"
        if key in self._cache:
            return self._cache[key]
        n = self.n
        if self.kind == "elliptic":
            racc = np.zeros((n * n, n * n), dtype=complex)
            macc = (specfn.theta(0, self.tau, 3) / (3.0 * specfn.theta(0, self.tau, 1))) * np.eye(
                n * n, dtype=complex
            )
            for tt, omega, a2 in self._ell_terms():
                if omega == 0:
                    continue
                racc = racc + (2j * np.pi * a2 / n + specfn.eisenstein("E1", omega, self.tau)) * tt
                macc = macc - specfn.eisenstein("E2", omega, self.tau) * tt
            out = TensorOp(n, 2, racc), TensorOp(n, 2, macc)
        elif self.kind == "yang":
            zero = TensorOp(n, 2, np.zeros((n * n, n * n)))
            out = zero, zero.copy()
        elif self.kind == "trig7v":
            m0 = np.diag([1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 1.0 / 3.0]).astype(complex)
            m0[3, 0] = -4.0 * np.exp(-2.0 * self.lam)
            out = TensorOp(2, 2, np.zeros((4, 4))), TensorOp(2, 2, m0)
        elif self.kind == "rat11v":
            m0 = np.zeros((4, 4), dtype=complex)
            m0[1, 0] = m0[2, 0] = -1.0
            m0[3, 1] = m0[3, 2] = 1.0
            out = TensorOp(2, 2, np.zeros((4, 4))), TensorOp(2, 2, m0)
        else:
            out = self._constant_oracle()
        self._cache[key] = out
        return out

    # -- oracle -----------------------------------------------------------
    def expansion_oracle(self, z, h=ORACLE_H, tol=1e-5, z_radius=None):
        """Extract (r(z), m(z)) from R^hbar(z) by symmetric Richardson limits.

        Uses hbar in {h, h/2, h/4} with +/- symmetrization: raw estimates carry
        O(h^2) truncation, and Richardson extrapolation of the (h, h/2) and
        (h/2, h/4) pairs cancels it.  The two extrapolated values should agree
        far below tol; a larger disagreement signals cancellation noise or a
        nearby singularity and raises InstabilityError.
        """
        z = complex(z)

        def g(hh):
            return self.eval_R(hh, z, hbar_radius=1e-6, z_radius=z_radius).mat - np.eye(self.n**2) / hh

        def base(hh):
            gp, gm = g(hh), g(-hh)
            return (gp + gm) / 2.0, (gp - gm) / (2.0 * hh)

        pairs = [base(h), base(h / 2.0), base(h / 4.0)]
        exts = []
        for (rc, mc), (rf, mf) in zip(pairs, pairs[1:]):
            exts.append(((4.0 * rf - rc) / 3.0, (4.0 * mf - mc) / 3.0))
        dis = max(
            np.max(np.abs(exts[0][0] - exts[1][0])),
            np.max(np.abs(exts[0][1] - exts[1][1])),
        )
        if dis > tol:
            raise InstabilityError(f"expansion oracle unstable at z={z}: disagreement {dis:.3g}")
        r, m = exts[1]
        return TensorOp(self.n, 2, r), TensorOp(self.n, 2, m)

    def _constant_oracle(self, z0=ORACLE_Z):
        p = permutation_P(self.n).mat

        def excess(zz):
            r, _ = self.classical_parts(zz, z_radius=z0 / 8.0)
            return r.mat - self.nres * p / zz

        def r0_base(zz):
            return (excess(zz) + excess(-zz)) / 2.0

        def m0_base(zz):
            _, mp = self.classical_parts(zz, z_radius=z0 / 8.0)
            _, mm = self.classical_parts(-zz, z_radius=z0 / 8.0)
            return (mp.mat + mm.mat) / 2.0

        r0 = (4.0 * r0_base(z0 / 2.0) - r0_base(z0)) / 3.0
        m0 = (4.0 * m0_base(z0 / 2.0) - m0_base(z0)) / 3.0
        return TensorOp(self.n, 2, r0), TensorOp(self.n, 2, m0)

    def expansion(self):
        r0, m0 = self.constant_parts()
        return ExpansionCoeffs(
            r=lambda z: self.classical_parts(z)[0],
            m=lambda z: self.classical_parts(z)[1],
            r0=r0,
            m0=m0,
        )

    # -- kernel z-derivatives ---------------------------------------------
    def dr(self, z):
        """d/dz r(z) in closed form."""
        z = complex(z)
        n = self.n
        if self.kind == "elliptic":
            self._require(self.z_pole_dist(z), "z")
            acc = specfn.eisenstein_d("dE1", z, self.tau) * np.eye(n * n, dtype=complex)
            for tt, omega, a2 in self._ell_terms():
                if omega == 0:
                    continue
                c = 2j * np.pi * a2 / n
                ph = np.exp(c * z)
                val = ph * (
                    c * specfn.kronecker_phi("elliptic", z, omega, tau=self.tau)
                    + specfn.phi_dz("elliptic", z, omega, tau=self.tau)
                )
                acc = acc + val * tt
            return TensorOp(n, 2, acc)
        if self.kind == "yang":
            self._require(abs(z), "z")
            return (-1.0 / z**2) * permutation_P(n)
        if self.kind == "trig7v":
            self._require(self.z_pole_dist(z), "z")
            s, c = np.sinh(z), np.cosh(z)
            d = np.zeros((4, 4), dtype=complex)
            d[0, 0] = d[3, 3] = -1.0 / s**2
            d[1, 2] = d[2, 1] = -c / s**2
            d[3, 0] = -4.0 * np.exp(-2.0 * self.lam) * c
            return TensorOp(2, 2, d)
        # rat11v
        self._require(abs(z), "z")
        d = np.zeros((4, 4), dtype=complex)
        d[0, 0] = d[3, 3] = d[1, 2] = d[2, 1] = -1.0 / z**2
        d[1, 0] = d[2, 0] = -1.0
        d[3, 0] = -3.0 * z**2
        d[3, 1] = d[3, 2] = 1.0
        return TensorOp(2, 2, d)

    def dm(self, z):
        """d/dz m(z), same conventions as dr."""
        z = complex(z)
        n = self.n
        if self.kind == "elliptic":
            self._require(self.z_pole_dist(z), "z")
            acc = specfn.eisenstein_d("drho", z, self.tau) * np.eye(n * n, dtype=complex)
            for tt, omega, a2 in self._ell_terms():
                if omega == 0:
                    continue
                c = 2j * np.pi * a2 / n
                ph = np.exp(c * z)
                val = ph * (
                    c * specfn.phi_partial("elliptic", z, omega, tau=self.tau)
                    + specfn.phi_dz_du(z, omega, self.tau)
                )
                acc = acc + val * tt
            return TensorOp(n, 2, acc)
        if self.kind == "yang":
            return TensorOp(n, 2, np.zeros((n * n, n * n)))
        if self.kind == "trig7v":
            self._require(self.z_pole_dist(z), "z")
            d = np.zeros((4, 4), dtype=complex)
            d[3, 0] = -4.0 * np.exp(-2.0 * self.lam) * np.sinh(z)
            return TensorOp(2, 2, d)
        # rat11v
        d = np.zeros((4, 4), dtype=complex)
        d[3, 0] = -4.0 * z
        return TensorOp(2, 2, d)

def _coth(x):
    return np.cosh(x) / np.sinh(x)


# -- module-level operation surface ---------------------------------------

def eval_R(family, hbar, z):
    return family.eval_R(hbar, z)


def classical_parts(family, z):
    return family.classical_parts(z)


def constant_parts(family):
    return family.constant_parts()


def expansion_oracle(family, z):
    return family.expansion_oracle(z)


def unitarity_scalar(family, hbar, z, tol=1e-8):
    """Verify R12(z) R21(-z) = F * identity; return (F, off-identity residual)."""
    prod = family.eval_R(hbar, z) @ family.eval_R(hbar, -z).swap()
    dim = prod.mat.shape[0]
    f = np.trace(prod.mat) / dim
    residual = float(np.max(np.abs(prod.mat - f * np.eye(dim))))
    if residual > tol * max(1.0, abs(f)):
        raise NonUnitaryError(
            f"{family.kind}: off-identity residual {residual:.3g} at hbar={hbar}, z={z}"
        )
    return f, residual


_PHI_SINH = lambda h, z: np.sinh(h + z) / (np.sinh(h) * np.sinh(z))


def unitarity_candidates(family):
    """Candidate closed forms for the unitarity scalar F^hbar(z), by family."""
    n = family.n

    def phi(h, z):
        if family.kind == "elliptic":
            return specfn.kronecker_phi("elliptic", h, z, tau=family.tau)
        if family.kind == "trig7v":
            return specfn.kronecker_phi("trigonometric", h, z)
        return specfn.kronecker_phi("rational", h, z)

    cands = {
        "N^2 phi(N hbar, z) phi(N hbar, -z)": lambda h, z: n * n * phi(n * h, z) * phi(n * h, -z),
        "phi(hbar, z) phi(hbar, -z)": lambda h, z: phi(h, z) * phi(h, -z),
    }
    if family.kind == "trig7v":
        cands["phi_sinh(hbar, z) phi_sinh(hbar, -z)"] = lambda h, z: _PHI_SINH(h, z) * _PHI_SINH(h, -z)
        cands["N^2 phi_sinh(N hbar, z) phi_sinh(N hbar, -z)"] = (
            lambda h, z: 4.0 * _PHI_SINH(2 * h, z) * _PHI_SINH(2 * h, -z)
        )
    return cands


def detect_unitarity_normalization(family, samples=12, seed=11):
    """Empirically pin which closed form the unitarity scalar follows.

    Returns (best_name, max_relative_deviation).  The choice is detection,
    never assumption: callers should assert the deviation is small before
    relying on the detected form.
    """
    rng = np.random.default_rng(seed)
    cands = unitarity_candidates(family)
    worst = {name: 0.0 for name in cands}
    done = 0
    while done < samples:
        h = rng.uniform(0.15, 0.45) + 1j * rng.uniform(0.02, 0.12)
        z = rng.uniform(0.15, 0.45) + 1j * rng.uniform(-0.12, -0.02)
        try:
            f, _ = unitarity_scalar(family, h, z)
        except SingularityError:
            continue  # resample away from the shifted-lattice poles
        done += 1
        for name, fn in cands.items():
            ref = fn(h, z)
            worst[name] = max(worst[name], abs(f - ref) / max(1.0, abs(ref)))
    best = min(worst, key=worst.get)
    return best, worst[best]


def residue_quadrature(f, center, radius=0.02, points=16):
    """Contour residue of a matrix- or scalar-valued f by trapezoid quadrature
    on a small circle around `center`."""
    acc = None
    for j in range(points):
        w = radius * np.exp(2j * np.pi * j / points)
        val = f(center + w)
        term = (val.mat if isinstance(val, TensorOp) else val) * w
        acc = term if acc is None else acc + term
    acc = acc / points
    if isinstance(val, TensorOp):
        return TensorOp(val.n, val.legs, acc)
    return acc
