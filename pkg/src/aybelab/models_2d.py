"""1+1 dimensional field-theory layer: U-V pairs on a periodic grid, minimal
coadjoint orbits, the auxiliary T-matrix solve, Landau-Lifshitz / chiral /
multi-pole first and second flows, pointwise Zakharov-Shabat residuals, and
twist-function deformations.

Conventions.  Fields live on M equispaced points of x in [0, 2pi).  A site
field is an (M, n, n) complex array; all kernel contractions reuse the
(1/nres) tr_2 primitive of models_fd, batched over the grid (nres is the
family's r-matrix residue coefficient, so Res_{z=z_a} U(z) = S^a).  Spatial derivatives
are discrete-Fourier (exact for band-limited data).

Flow specifications are tuples:
    ("first", a)                - V = -L(S^a, z - z_a)
    ("first_difference", a, b)  - V = L(S^a, z - z_a) - L(S^b, z - z_b)
    ("second", a)               - the T^a-based second-flow ansatz
with a, b site indices (0-based).

Orientation note.  All right-hand sides produced by eom_2d are normalized so
that the Zakharov-Shabat equation dt U - k dx V = [U, V] holds with the
V-matrices of build_V; this matches the Lax normalization of models_fd
(gaudin_eom) under the x-independent reduction.
"""

import json

import numpy as np

from .errors import DomainError, OrbitError, SolveError
from .rmat import RFamily

ORBIT_TOL = 1e-10
CONSTRAINT_TOL = 1e-8

# Pinned readings for ambiguously printed second-flow terms; each can be
# overridden per call and is arbitrated numerically by zs_residual (see tests).
DEFAULT_READINGS = {
    # inner kernel of S^a I^{ai}([S^i, I^{?}(S^a)]): "ia" uses r(z_i - z_a),
    # "ai" uses r(z_a - z_i)
    "inner_index": "ia",
    # the 2k E-term of the simplified minimal-orbit flow: "commutator" is
    # 2k [E(dxS), S], "of_commutator" is 2k E([dxS, S])
    "min_e_term": "commutator",
}


def fourier_dx(field):
    """d/dx of an (M, n, n) field on the uniform periodic grid over [0, 2pi).

    Discrete Fourier differentiation with the Nyquist mode zeroed; exact for
    band-limited input.
    """
    field = np.asarray(field, dtype=complex)
    m = field.shape[0]
    kx = np.fft.fftfreq(m, d=1.0 / m)  # integer wave numbers
    sym = 1j * kx
    if m % 2 == 0:
        sym[m // 2] = 0.0
    hat = np.fft.fft(field, axis=0)
    return np.fft.ifft(hat * sym.reshape(-1, 1, 1), axis=0)


def contract_field(kernel, field, norm=None):
    """(1/norm) tr_2(K_12 S_2) at every grid point of an (M,n,n) field.

    norm defaults to the leg dimension; model code passes family.nres.
    """
    n = kernel.n
    if norm is None:
        norm = n
    k4 = kernel.mat.reshape(n, n, n, n)
    return (
        np.einsum("ikjl,xlk->xij", k4, np.asarray(field, dtype=complex)) / norm
    )


def comm(a, b):
    """Pointwise commutator of (M, n, n) fields (or plain matrices)."""
    return a @ b - b @ a


class MinimalOrbit:
    """Rank-one residue S = xi (x) eta with pairing (eta, xi) = c."""

    def __init__(self, xi, eta):
        xi = np.asarray(xi, dtype=complex).reshape(-1)
        eta = np.asarray(eta, dtype=complex).reshape(-1)
        if xi.shape != eta.shape:
            raise DomainError("xi and eta must have the same length")
        c = complex(eta @ xi)
        if abs(c) < 1e-12:
            raise OrbitError("degenerate orbit: (eta, xi) = 0")
        self.xi = xi
        self.eta = eta
        self.c = c

    def matrix(self):
        return np.outer(self.xi, self.eta)


def minimal_orbit(xi, eta, family=None):
    """(S, report) for the rank-one matrix S = xi (x) eta.

    The report carries the residuals of S^2 = cS, tr S = c and, when a family
    is supplied, of the projector identity S E(S) = 0.
    """
    orb = MinimalOrbit(xi, eta)
    S = orb.matrix()
    c = orb.c
    report = {
        "c": c,
        "orbit_residual": float(np.max(np.abs(S @ S - c * S))),
        "trace_residual": abs(np.trace(S) - c),
    }
    if family is not None:
        r0, _ = family.constant_parts()
        n = family.n
        E = (
            np.einsum("ikjl,lk->ij", r0.mat.reshape(n, n, n, n), S)
            / family.nres
        )
        report["SE_residual"] = float(np.max(np.abs(S @ E)))
    return S, report


class FieldState:
    """Configuration of a 1+1 model: gridded residues at marked points.

    sites is a list of (z_a, field) with field of shape (M, n, n); k is the
    constant in dt U - k dx V = [U, V]; orbit_c, when set, asserts the orbit
    condition (S^a)^2 = c S^a at every grid point.
    """

    def __init__(self, sites, k, family, orbit_c=None):
        n = family.n
        pts = [complex(z) for z, _ in sites]
        for i, zi in enumerate(pts):
            for zj in pts[i + 1 :]:
                if abs(zi - zj) < 1e-12:
                    raise DomainError("marked points must be pairwise distinct")
        fields = []
        m = None
        for _, f in sites:
            f = np.asarray(f, dtype=complex)
            if f.ndim != 3 or f.shape[1:] != (n, n):
                raise DomainError(f"site fields must have shape (M, {n}, {n})")
            if m is None:
                m = f.shape[0]
            elif f.shape[0] != m:
                raise DomainError("all site fields must share one grid")
            if not np.all(np.isfinite(f)):
                raise DomainError("site fields must be finite")
            fields.append(f.copy())
        self.points = pts
        self.fields = fields
        self.k = complex(k)
        self.family = family
        self.orbit_c = None if orbit_c is None else complex(orbit_c)
        self.M = m
        if self.orbit_c is not None:
            c = self.orbit_c
            for a, f in enumerate(fields):
                dev = float(np.max(np.abs(f @ f - c * f)))
                if dev > ORBIT_TOL:
                    raise OrbitError(
                        f"site {a} violates S^2 = cS (deviation {dev:.2e})"
                    )

    @property
    def n(self):
        return self.family.n

    @property
    def nsites(self):
        return len(self.points)

    @property
    def x(self):
        return 2 * np.pi * np.arange(self.M) / self.M

    def replace(self, fields, orbit_c=None):
        """New state with the same sites/k/family but different fields.

        The orbit constraint is not inherited (derivative fields do not
        satisfy it); pass orbit_c explicitly to re-assert it.
        """
        return FieldState(
            list(zip(self.points, fields)), self.k, self.family, orbit_c
        )

    def to_json(self):
        """JSON-serializable dict; complex numbers stored as [re, im] pairs."""

        def cpair(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {
            "n": self.n,
            "M": self.M,
            "k": cpair(self.k),
            "family": self.family.descriptor(),
            "orbit_c": None if self.orbit_c is None else cpair(self.orbit_c),
            "sites": [
                {
                    "z": cpair(z),
                    "S": np.stack([f.real, f.imag], axis=-1).tolist(),
                }
                for z, f in zip(self.points, self.fields)
            ],
        }

    @classmethod
    def from_json(cls, doc):
        fam = RFamily.from_descriptor(doc["family"])
        sites = []
        for site in doc["sites"]:
            z = complex(site["z"][0], site["z"][1])
            arr = np.asarray(site["S"], dtype=float)
            sites.append((z, arr[..., 0] + 1j * arr[..., 1]))
        k = complex(doc["k"][0], doc["k"][1])
        oc = doc.get("orbit_c")
        oc = None if oc is None else complex(oc[0], oc[1])
        return cls(sites, k, fam, orbit_c=oc)

    def dumps(self):
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text):
        return cls.from_json(json.loads(text))


def _r_kernel(state, dz):
    return state.family.classical_parts(dz)[0]


def _I_field(state, a, b, field):
    """I^{ab} applied pointwise: (1/nres) tr_2(r_12(z_a - z_b) S_2)."""
    return contract_field(
        _r_kernel(state, state.points[a] - state.points[b]),
        field,
        state.family.nres,
    )


def _J_field(state, a, b, field):
    """J^{ab} pointwise; a == b uses the constant kernel m(0)."""
    if a == b:
        kernel = state.family.constant_parts()[1]
    else:
        kernel = state.family.classical_parts(
            state.points[a] - state.points[b]
        )[1]
    return contract_field(kernel, field, state.family.nres)


def _E_field(state, field):
    return contract_field(
        state.family.constant_parts()[0], field, state.family.nres
    )


def build_U(state, z):
    """U(z) = sum_a L(S^a, z - z_a) as an (M, n, n) field."""
    acc = np.zeros((state.M, state.n, state.n), dtype=complex)
    nr = state.family.nres
    for za, f in zip(state.points, state.fields):
        acc += contract_field(_r_kernel(state, z - za), f, nr)
    return acc


def build_U_closed(state, z, include_identity=False):
    """Elliptic U(z) assembled in the torus basis (independent code path).

    The identity part (the E_1 sum weighted by the T_(0,0) components) is
    dropped by default; include_identity=True re-enables it and requires
    sum_a tr S^a = 0 at every grid point.
    """
    from .specfn import eisenstein
    from .tensor import belavin_T

    fam = state.family
    if fam.kind != "elliptic":
        raise DomainError("closed-form U is defined for the elliptic family")
    n = fam.n
    tau = fam.tau
    acc = np.zeros((state.M, n, n), dtype=complex)
    if include_identity:
        s00 = sum(np.trace(f, axis1=1, axis2=2) / n for f in state.fields)
        if float(np.max(np.abs(s00))) > 1e-9:
            raise DomainError(
                "the identity part requires sum_a tr S^a = 0 on the grid"
            )
        for za, f in zip(state.points, state.fields):
            s = np.trace(f, axis1=1, axis2=2) / n
            acc += (
                s.reshape(-1, 1, 1)
                * eisenstein("E1", z - za, tau)
                * np.eye(n)[None, :, :]
            )
    from .specfn import ELLIPTIC, kronecker_phi

    for a1 in range(n):
        for a2 in range(n):
            if a1 == 0 and a2 == 0:
                continue
            Ta = belavin_T(n, a1, a2)
            Tneg = belavin_T(n, -a1, -a2)
            om = (a1 + a2 * tau) / n
            for za, f in zip(state.points, state.fields):
                coeff = np.einsum("ij,xji->x", Tneg, f) / n
                w = np.exp(2j * np.pi * a2 * (z - za) / n) * kronecker_phi(
                    ELLIPTIC, z - za, om, tau=tau
                )
                acc += (coeff * w).reshape(-1, 1, 1) * Ta[None, :, :]
    return acc


def solve_T(state, a, validate=True):
    """Auxiliary matrix of the second flow at site a.

    T^a = -(k/c^2) [S^a, dx S^a] + sum_{i != a} I^{ai}(S^i), which solves the
    constraint k dx S^a = [S^a, sum_{i != a} I^{ai}(S^i) - T^a] on the orbit
    (S^a)^2 = c S^a.
    """
    if state.orbit_c is None:
        raise OrbitError("solve_T requires orbit_c to be set")
    c = state.orbit_c
    Sa = state.fields[a]
    dSa = fourier_dx(Sa)
    T = -(state.k / c**2) * comm(Sa, dSa)
    cross = np.zeros_like(T)
    for i in range(state.nsites):
        if i != a:
            cross += _I_field(state, a, i, state.fields[i])
    T = T + cross
    if validate:
        resid = float(
            np.max(np.abs(state.k * dSa - comm(Sa, cross - T)))
        )
        if resid > CONSTRAINT_TOL:
            raise SolveError(
                f"T^a constraint residual {resid:.2e} exceeds {CONSTRAINT_TOL}"
            )
    return T


def build_V(state, flow, z):
    """V-matrix of the given flow at spectral point z, per grid point."""
    kind = flow[0]
    nr = state.family.nres
    if kind == "first":
        a = flow[1]
        return -contract_field(
            _r_kernel(state, z - state.points[a]), state.fields[a], nr
        )
    if kind == "first_difference":
        a, b = flow[1], flow[2]
        return contract_field(
            _r_kernel(state, z - state.points[a]), state.fields[a], nr
        ) - contract_field(
            _r_kernel(state, z - state.points[b]), state.fields[b], nr
        )
    if kind == "second":
        a = flow[1]
        c = state.orbit_c
        if c is None:
            raise OrbitError("the second flow requires orbit_c")
        Sa = state.fields[a]
        T = solve_T(state, a)
        E = _E_field(state, Sa)
        dz_kernel = state.family.dr(z - state.points[a])
        out = -c * contract_field(dz_kernel, Sa, nr)
        out += c * contract_field(_r_kernel(state, z - state.points[a]), T, nr)
        out += contract_field(
            _r_kernel(state, z - state.points[a]), E @ Sa + Sa @ E, nr
        )
        return out
    raise DomainError(f"unknown flow kind: {kind!r}")


def _eom_first(state, a):
    out = []
    cross_a = np.zeros((state.M, state.n, state.n), dtype=complex)
    for i in range(state.nsites):
        if i != a:
            cross_a += _I_field(state, a, i, state.fields[i])
    for b in range(state.nsites):
        Sb = state.fields[b]
        if b == a:
            out.append(-state.k * fourier_dx(Sb) + comm(Sb, cross_a))
        else:
            out.append(comm(_I_field(state, b, a, state.fields[a]), Sb))
    return out


def _eom_first_difference(state, a, b):
    out = []
    for i in range(state.nsites):
        Si = state.fields[i]
        Ia = _I_field(state, i, a, state.fields[a]) if i != a else None
        Ib = _I_field(state, i, b, state.fields[b]) if i != b else None
        if i == a:
            cross = np.zeros_like(Si)
            for j in range(state.nsites):
                if j != a:
                    cross += _I_field(state, a, j, state.fields[j])
            rhs = state.k * fourier_dx(Si) - comm(Si, Ib) + comm(cross, Si)
        elif i == b:
            cross = np.zeros_like(Si)
            for j in range(state.nsites):
                if j != b:
                    cross += _I_field(state, b, j, state.fields[j])
            rhs = -state.k * fourier_dx(Si) + comm(Si, Ia) - comm(cross, Si)
        else:
            rhs = comm(Si, Ia) - comm(Si, Ib)
        out.append(rhs)
    return out


def _eom_second(state, a, readings):
    """General-orbit second flow: the T^a-ansatz equations of motion."""
    c = state.orbit_c
    k = state.k
    nr = state.family.nres
    Sa = state.fields[a]
    T = solve_T(state, a)
    E_Sa = _E_field(state, Sa)
    E_T = _E_field(state, T)
    J_Sa = _J_field(state, a, a, Sa)
    tr_a = np.trace(Sa, axis1=1, axis2=2).reshape(-1, 1, 1)
    out = [None] * state.nsites

    rhs = k * fourier_dx(E_Sa @ Sa + Sa @ E_Sa) + k * c * fourier_dx(T)
    rhs += c * comm(Sa, E_T) + c * comm(E_Sa, T)
    rhs -= (2.0 / nr) * tr_a * comm(Sa, J_Sa)
    for i in range(state.nsites):
        if i == a:
            continue
        Si = state.fields[i]
        Iai = _I_field(state, a, i, Si)
        br = comm(Iai, Sa)
        E_br = _E_field(state, br)
        rhs += c * comm(Iai, T)
        rhs += Sa @ E_br + E_br @ Sa + E_Sa @ br + br @ E_Sa
        if readings["inner_index"] == "ia":
            inner = _I_field(state, i, a, Sa)
        else:
            inner = _I_field(state, a, i, Sa)
        nested = _I_field(state, a, i, comm(Si, inner))
        rhs += Sa @ nested + nested @ Sa
    out[a] = rhs

    for i in range(state.nsites):
        if i == a:
            continue
        Si = state.fields[i]
        Iia_T = _I_field(state, i, a, T)
        Jia_Sa = _J_field(state, i, a, Sa)
        Iia_Sa = _I_field(state, i, a, Sa)
        out[i] = (
            c * comm(Si, Iia_T)
            - (2.0 / nr) * tr_a * comm(Si, Jia_Sa)
            + comm(Si, Iia_Sa @ Iia_Sa)
        )
    return out


def _eom_second_minimal(state, a, readings):
    """Simplified second flow for rank-one (minimal-orbit) fields, with T^a
    already substituted."""
    c = state.orbit_c
    k = state.k
    nr = state.family.nres
    Sa = state.fields[a]
    dSa = fourier_dx(Sa)
    E_Sa = _E_field(state, Sa)
    J_Sa = _J_field(state, a, a, Sa)
    tr_a = np.trace(Sa, axis1=1, axis2=2).reshape(-1, 1, 1)
    comm_S_dS = comm(Sa, dSa)
    out = [None] * state.nsites

    if state.nsites == 1:
        rhs = -(k**2 / c) * comm(Sa, fourier_dx(dSa))
        rhs -= (2.0 / nr) * tr_a * comm(Sa, J_Sa)
        if readings["min_e_term"] == "commutator":
            rhs -= 2 * k * comm(Sa, _E_field(state, dSa))
        else:
            rhs -= 2 * k * _E_field(state, comm(Sa, dSa))
        out[a] = rhs
        return out

    rhs = -(k**2 / c) * comm(Sa, fourier_dx(dSa))
    rhs -= (2.0 / nr) * tr_a * comm(Sa, J_Sa)
    if readings["min_e_term"] == "commutator":
        rhs += 2 * k * comm(_E_field(state, dSa), Sa)
    else:
        rhs += 2 * k * _E_field(state, comm(dSa, Sa))
    for j in range(state.nsites):
        if j == a:
            continue
        Iaj = _I_field(state, a, j, state.fields[j])
        rhs += k * c * fourier_dx(Iaj)
        rhs += c * comm(Sa, _E_field(state, Iaj))
        rhs += c * comm(E_Sa, Iaj)
    cross = np.zeros_like(Sa)
    for j in range(state.nsites):
        if j != a:
            cross += _I_field(state, a, j, state.fields[j])
    for i in range(state.nsites):
        if i == a:
            continue
        Si = state.fields[i]
        Iai = _I_field(state, a, i, Si)
        rhs -= (k / c) * comm(Iai, comm_S_dS)
        if readings["inner_index"] == "ia":
            inner = _I_field(state, i, a, Sa)
        else:
            inner = _I_field(state, a, i, Sa)
        nested = _I_field(state, a, i, comm(Si, inner))
        rhs += Sa @ nested + nested @ Sa
        rhs += 2 * E_Sa @ Iai @ Sa - E_Sa @ Sa @ Iai
        rhs -= _E_field(state, Sa @ Iai) @ Sa
    rhs += c * comm(cross, cross)  # vanishes for two sites
    out[a] = rhs

    for i in range(state.nsites):
        if i == a:
            continue
        Si = state.fields[i]
        Iia_Sa = _I_field(state, i, a, Sa)
        acc = -(k / c) * comm(Si, _I_field(state, i, a, comm_S_dS))
        acc -= (2.0 / nr) * tr_a * comm(Si, _J_field(state, i, a, Sa))
        acc += Iia_Sa @ comm(Si, Iia_Sa) + comm(Si, Iia_Sa) @ Iia_Sa
        for j in range(state.nsites):
            if j != a:
                Iaj = _I_field(state, a, j, state.fields[j])
                acc += c * comm(Si, _I_field(state, i, a, Iaj))
        out[i] = acc
    return out


def eom_2d(state, flow, simplified=False, readings=None):
    """Right-hand sides dt S^a for all sites of the given flow.

    simplified=True selects the minimal-orbit (rank-one) form of the second
    flow with T^a substituted; readings overrides the pinned term readings
    (see DEFAULT_READINGS).
    """
    r = dict(DEFAULT_READINGS)
    if readings:
        r.update(readings)
    kind = flow[0]
    if kind == "first":
        return _eom_first(state, flow[1])
    if kind == "first_difference":
        return _eom_first_difference(state, flow[1], flow[2])
    if kind == "second":
        if state.orbit_c is None:
            raise OrbitError("the second flow requires orbit_c")
        if simplified:
            return _eom_second_minimal(state, flow[1], r)
        return _eom_second(state, flow[1], r)
    raise DomainError(f"unknown flow kind: {kind!r}")


def zs_residual(state, flow, z_samples, simplified=False, readings=None):
    """Zakharov-Shabat residuals ||dt U - k dx V - [U, V]|| per z sample.

    dt U is assembled by linearity from the eom_2d right-hand sides; dx V is
    spectral.  Returns a list of max-over-grid residuals.
    """
    rhs = eom_2d(state, flow, simplified=simplified, readings=readings)
    dstate = state.replace(rhs)
    out = []
    for z in np.atleast_1d(z_samples):
        U = build_U(state, z)
        V = build_V(state, flow, z)
        dtU = build_U(dstate, z)
        resid = dtU - state.k * fourier_dx(V) - comm(U, V)
        out.append(float(np.max(np.abs(resid))))
    return out


class TwistFunction:
    """Pole/zero data of the cocentral-charge function k(z)/k.

    kind "rational": k(z)/k = prod_b (z - y_b)/(z - w_b).
    kind "elliptic": theta ratios instead of linear factors; requires
    sum(y_b) = sum(w_b) for double-periodicity.
    """

    def __init__(self, kind, poles, zeros, tau=None):
        if kind not in ("rational", "elliptic"):
            raise DomainError(f"unknown twist kind: {kind!r}")
        poles = [complex(w) for w in poles]
        zeros = [complex(y) for y in zeros]
        if len(poles) != len(zeros):
            raise DomainError("twist needs equally many poles and zeros")
        for i, wi in enumerate(poles):
            for wj in poles[i + 1 :]:
                if abs(wi - wj) < 1e-12:
                    raise DomainError("twist poles must be distinct")
        if kind == "elliptic":
            if tau is None or np.imag(tau) <= 0:
                raise DomainError("elliptic twist requires Im tau > 0")
            if abs(sum(zeros) - sum(poles)) > 1e-12:
                raise DomainError(
                    "elliptic twist requires sum(zeros) = sum(poles)"
                )
        self.kind = kind
        self.poles = poles
        self.zeros = zeros
        self.tau = None if tau is None else complex(tau)


def twist_make(kind, poles, zeros, tau=None):
    return TwistFunction(kind, poles, zeros, tau=tau)


def twist_eval(t, z):
    """k(z)/k at the point z."""
    if t.kind == "rational":
        val = 1.0 + 0.0j
        for w, y in zip(t.poles, t.zeros):
            val *= (z - y) / (z - w)
        return val
    from .specfn import theta

    val = 1.0 + 0.0j
    for w, y in zip(t.poles, t.zeros):
        val *= theta(z - y, t.tau) / theta(z - w, t.tau)
    return val


def twist_residues(t):
    """Residues s_b of k(z)/k at its poles w_b (closed product formulas)."""
    out = []
    if t.kind == "rational":
        for b, wb in enumerate(t.poles):
            num = np.prod([wb - y for y in t.zeros])
            den = np.prod(
                [wb - w for j, w in enumerate(t.poles) if j != b] or [1.0]
            )
            out.append(complex(num / den))
        return out
    from .specfn import theta, theta_constants

    tp0, _ = theta_constants(t.tau)
    for b, wb in enumerate(t.poles):
        num = np.prod([theta(wb - y, t.tau) for y in t.zeros])
        den = tp0 * np.prod(
            [theta(wb - w, t.tau) for j, w in enumerate(t.poles) if j != b]
            or [1.0]
        )
        out.append(complex(num / den))
    return out


def twist_apply(state, t, z):
    """Deformed U-matrix: tilde U(z) = (k / k(z)) U(z) = U(z) / twist_eval."""
    denom = twist_eval(t, z)
    if abs(denom) < 1e-12:
        from .errors import SingularityError

        raise SingularityError("twist_apply evaluated at a zero of k(z)")
    return build_U(state, z) / denom


def twisted_r(family, t, z, w):
    """Twisted structure kernel tilde r_12(z, w) = (k(z)/k) r_12(z - w)."""
    r = family.classical_parts(z - w)[0]
    return complex(twist_eval(t, z)) * r


def twist_partial_fractions(residues, t):
    """Partial fractions of tilde U(z) = (k/k(z)) sum_a S^a/(z - z_a).

    residues is a list of (z_a, S_a) with matrix (or scalar) S_a; t must be a
    rational twist.  Returns the list of (pole, residue) of tilde U: the
    original poles z_a rescaled by 1/t(z_a), plus one pole per twist zero y_b.
    """
    if t.kind != "rational":
        raise DomainError("partial fractions require a rational twist")
    out = []
    for za, Sa in residues:
        out.append((complex(za), np.asarray(Sa, dtype=complex) / twist_eval(t, za)))
    # residues of 1/t(z) = prod (z - w)/(z - y) at its poles y_b
    for b, yb in enumerate(t.zeros):
        num = np.prod([yb - w for w in t.poles])
        den = np.prod(
            [yb - y for j, y in enumerate(t.zeros) if j != b] or [1.0]
        )
        inv_res = num / den
        acc = None
        for za, Sa in residues:
            term = np.asarray(Sa, dtype=complex) * (inv_res / (yb - za))
            acc = term if acc is None else acc + term
        out.append((complex(yb), acc))
    return out


def random_minimal_field(n, m, c=1.0, band=3, seed=0, site_shift=0.0):
    """Band-limited rank-one field S(x) = xi(x) (x) eta(x) with eta xi = c.

    xi = (1, w_2, ..., w_n)^T and eta = (c - sum_i v_i w_i, v_2, ..., v_n)
    with v_i, w_i random trigonometric polynomials of bandwidth <= band, so
    the pairing is exactly c at every grid point and S is band-limited to
    3*band modes.  Returns an (m, n, n) array.
    """
    rng = np.random.default_rng(seed)
    x = 2 * np.pi * np.arange(m) / m + site_shift

    def trig_poly():
        coef = 0.3 * (
            rng.normal(size=2 * band + 1) + 1j * rng.normal(size=2 * band + 1)
        )
        modes = np.arange(-band, band + 1)
        return np.sum(
            coef.reshape(-1, 1) * np.exp(1j * np.outer(modes, x)), axis=0
        )

    xi = np.empty((m, n), dtype=complex)
    eta = np.empty((m, n), dtype=complex)
    xi[:, 0] = 1.0
    pairing = np.zeros(m, dtype=complex)
    for i in range(1, n):
        w = trig_poly()
        v = trig_poly()
        xi[:, i] = w
        eta[:, i] = v
        pairing += v * w
    eta[:, 0] = c - pairing
    return np.einsum("xi,xj->xij", xi, eta)
