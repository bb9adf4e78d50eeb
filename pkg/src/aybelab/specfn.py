"""Complex special functions: Jacobi theta, the Kronecker function and its
degenerations, Eisenstein/Weierstrass functions and derived kernels.

Conventions
-----------
The theta function used everywhere is the odd first Jacobi theta in the form

    theta(z) = - sum_k exp( pi*i*tau*(k+1/2)^2 + 2*pi*i*(z+1/2)*(k+1/2) )

with nome |exp(pi*i*tau)| < 1, i.e. Im(tau) > 0.  The Kronecker function is

    phi(h, z) = theta'(0) theta(h+z) / (theta(h) theta(z))

with trigonometric degeneration pi*sin(pi*(h+z))/(sin(pi*h)*sin(pi*z)) and
rational degeneration (h+z)/(h*z).  All functions are pure and operate on
scalars in double-precision complex arithmetic.
"""

import numpy as np

from .errors import DomainError, SingularityError

# Flavors of the Kronecker function and its relatives.
ELLIPTIC = "elliptic"
TRIGONOMETRIC = "trigonometric"
RATIONAL = "rational"
FLAVORS = (ELLIPTIC, TRIGONOMETRIC, RATIONAL)

# Default exclusion radius around poles / lattice points.
POLE_RADIUS = 0.05

_THETA_KMAX = 256


def _check_tau(tau):
    tau = complex(tau)
    if not np.isfinite(tau.real) or not np.isfinite(tau.imag) or tau.imag <= 0.0:
        raise DomainError(f"theta modulus requires Im(tau) > 0, got tau={tau}")
    return tau


def lattice_dist(z, tau):
    """Distance from z to the lattice Z + tau*Z."""
    tau = complex(tau)
    z = complex(z)
    q = z.imag / tau.imag
    p = z.real - q * tau.real
    best = np.inf
    for dp in (-1, 0, 1):
        for dq in (-1, 0, 1):
            w = (round(p) + dp) + (round(q) + dq) * tau
            best = min(best, abs(z - w))
    return best


def _int_dist(z):
    """Distance from z to the integers."""
    z = complex(z)
    return abs(z - round(z.real))


def theta(z, tau, deriv=0):
    """Value of the theta series, or of its deriv-th z-derivative.

    Truncation is adaptive: the summation range is chosen so that the first
    omitted term is below 1e-18 relative scale, capped at |k+1/2| <= 256.
    """
    tau = _check_tau(tau)
    z = complex(z)
    imt = tau.imag
    # Terms decay like exp(-pi*imt*h^2 + 2*pi*|Im z|*h); pick the range so the
    # boundary term is ~1e-20.
    kmax = int(np.ceil(abs(z.imag) / imt + np.sqrt(50.0 / (np.pi * imt)) + 4))
    kmax = min(kmax, _THETA_KMAX)
    half = np.arange(-kmax, kmax) + 0.5
    expo = 1j * np.pi * tau * half**2 + 2j * np.pi * (z + 0.5) * half
    terms = np.exp(expo)
    if deriv:
        terms = terms * (2j * np.pi * half) ** deriv
    return -np.sum(terms)


def theta_constants(tau):
    """First and third derivatives of theta at the origin: (theta'(0), theta'''(0))."""
    tau = _check_tau(tau)
    return theta(0.0, tau, deriv=1), theta(0.0, tau, deriv=3)


def _check_away(dist, what, radius):
    if dist < radius:
        raise SingularityError(f"{what} within {radius} of a pole (distance {dist:.3g})")


def kronecker_phi(flavor, hbar, z, tau=None, radius=POLE_RADIUS):
    """Kronecker function phi(hbar, z) in the requested flavor.

    Symmetric in its two arguments; has simple poles where either argument
    hits the singular set of the flavor (the period lattice, the integers
    after the pi-scaling, or the origin).
    """
    hbar = complex(hbar)
    z = complex(z)
    if flavor == RATIONAL:
        _check_away(abs(hbar), "hbar", radius)
        _check_away(abs(z), "z", radius)
        return (hbar + z) / (hbar * z)
    if flavor == TRIGONOMETRIC:
        _check_away(_int_dist(hbar), "hbar", radius)
        _check_away(_int_dist(z), "z", radius)
        return np.pi * np.sin(np.pi * (hbar + z)) / (np.sin(np.pi * hbar) * np.sin(np.pi * z))
    if flavor == ELLIPTIC:
        tau = _check_tau(tau)
        _check_away(lattice_dist(hbar, tau), "hbar", radius)
        _check_away(lattice_dist(z, tau), "z", radius)
        return theta(0.0, tau, 1) * theta(hbar + z, tau) / (theta(hbar, tau) * theta(z, tau))
    raise DomainError(f"unknown flavor {flavor!r}")


def phi_partial(flavor, z, u, tau=None, radius=POLE_RADIUS):
    """f(z, u) = d/du phi(z, u), via closed forms.

    The elliptic closed form phi(z,u)*(E1(u+z) - E1(u)) is validated against a
    finite-difference oracle in the test suite before being relied upon.
    """
    z = complex(z)
    u = complex(u)
    if flavor == RATIONAL:
        _check_away(abs(u), "u", radius)
        return -1.0 / u**2
    if flavor == TRIGONOMETRIC:
        p = kronecker_phi(TRIGONOMETRIC, z, u, radius=radius)
        return p * np.pi * (_cot(np.pi * (z + u)) - _cot(np.pi * u))
    if flavor == ELLIPTIC:
        p = kronecker_phi(ELLIPTIC, z, u, tau=tau, radius=radius)
        return p * (eisenstein("E1", u + z, tau, radius=radius) - eisenstein("E1", u, tau, radius=radius))
    raise DomainError(f"unknown flavor {flavor!r}")


def _cot(x):
    return np.cos(x) / np.sin(x)


def eisenstein(kind, z, tau, radius=POLE_RADIUS):
    """Eisenstein-type functions of the elliptic modulus.

    kind:
      E1  -- theta'(z)/theta(z)
      E2  -- -d/dz E1(z)
      wp  -- Weierstrass function, E2 + theta'''(0)/(3 theta'(0))
      rho -- (E1(z)^2 - wp(z)) / 2
    """
    tau = _check_tau(tau)
    z = complex(z)
    _check_away(lattice_dist(z, tau), "z", radius)
    t0 = theta(z, tau)
    t1 = theta(z, tau, 1)
    if kind == "E1":
        return t1 / t0
    t2 = theta(z, tau, 2)
    e1 = t1 / t0
    e2 = e1 * e1 - t2 / t0
    if kind == "E2":
        return e2
    tp0, tppp0 = theta_constants(tau)
    wp = e2 + tppp0 / (3.0 * tp0)
    if kind == "wp":
        return wp
    if kind == "rho":
        return (e1 * e1 - wp) / 2.0
    raise DomainError(f"unknown Eisenstein kind {kind!r}")


def eisenstein_d(kind, z, tau, radius=POLE_RADIUS):
    """Analytic z-derivatives of the Eisenstein kernels.

    kind:
      dE1  -- E1'(z) = -E2(z)
      dE2  -- E2'(z)
      drho -- rho'(z)
    Needed for closed-form d/dz of the classical expansion kernels.
    """
    tau = _check_tau(tau)
    z = complex(z)
    _check_away(lattice_dist(z, tau), "z", radius)
    t0 = theta(z, tau)
    t1 = theta(z, tau, 1)
    t2 = theta(z, tau, 2)
    t3 = theta(z, tau, 3)
    e1 = t1 / t0
    e1p = t2 / t0 - e1 * e1
    if kind == "dE1":
        return e1p
    e1pp = t3 / t0 - 3.0 * t2 * t1 / t0**2 + 2.0 * e1**3
    if kind == "dE2":
        return -e1pp
    if kind == "drho":
        # rho = (E1^2 - wp)/2, wp' = E2' = -E1''
        return (2.0 * e1 * e1p + e1pp) / 2.0
    raise DomainError(f"unknown derivative kind {kind!r}")


def phi_dz(flavor, z, u, tau=None, radius=POLE_RADIUS):
    """d/dz phi(z, u), closed form (by symmetry of phi this mirrors phi_partial)."""
    z = complex(z)
    u = complex(u)
    if flavor == RATIONAL:
        _check_away(abs(z), "z", radius)
        return -1.0 / z**2
    if flavor == TRIGONOMETRIC:
        p = kronecker_phi(TRIGONOMETRIC, z, u, radius=radius)
        return p * np.pi * (_cot(np.pi * (z + u)) - _cot(np.pi * z))
    if flavor == ELLIPTIC:
        p = kronecker_phi(ELLIPTIC, z, u, tau=tau, radius=radius)
        return p * (eisenstein("E1", u + z, tau, radius=radius) - eisenstein("E1", z, tau, radius=radius))
    raise DomainError(f"unknown flavor {flavor!r}")


def phi_dz_du(z, u, tau, radius=POLE_RADIUS):
    """Mixed derivative d^2/(dz du) phi(z, u) for the elliptic flavor."""
    p = kronecker_phi(ELLIPTIC, z, u, tau=tau, radius=radius)
    e1_zu = eisenstein("E1", z + u, tau, radius=radius)
    e1_z = eisenstein("E1", z, tau, radius=radius)
    e1_u = eisenstein("E1", u, tau, radius=radius)
    e2_zu = eisenstein("E2", z + u, tau, radius=radius)
    return p * ((e1_zu - e1_z) * (e1_zu - e1_u) - e2_zu)
