"""Finite-dimensional integrable models on top of the classical r-matrix data:
Euler-Arnold tops, Gaudin flows, Schlesinger zero-curvature residuals, and the
linear Poisson / r-matrix structure check.

All model maps are instances of one kernel contraction

    contract(K, S) = (1/nres) tr_2( K_12 S_2 ),

specialized by the kernel K in {r(z), m(z), r0, m(0), dr(z), dm(z)}.  The
normalization constant nres is the z-residue coefficient of the family's
classical r-matrix (Res r(z) = nres * P12): n for the elliptic family, 1 for
the others.  With this choice Res_{z=z_a} L(S, z - z_a) = S, which is what the
non-autonomous and field-theory equations require; for families where
nres = n it coincides with the 1/N trace convention.
"""

import numpy as np

from .errors import DomainError
from .rmat import RFamily
from .tensor import TensorOp, leg_embed


def contract(kernel, S, norm=None):
    """(1/norm) tr_2(K_12 S_2) for a 2-leg kernel and a single-leg matrix S.

    norm defaults to the leg dimension; model code passes family.nres.
    """
    n = kernel.n
    if norm is None:
        norm = n
    k4 = kernel.mat.reshape(n, n, n, n)
    return np.einsum("ikjl,lk->ij", k4, np.asarray(S, dtype=complex)) / norm


def pair_trace(kernel, A, B, norm=None):
    """(1/norm) tr_12(K_12 A_1 B_2)."""
    n = kernel.n
    if norm is None:
        norm = n
    k4 = kernel.mat.reshape(n, n, n, n)
    return np.einsum("ikjl,ji,lk->", k4, np.asarray(A), np.asarray(B)) / norm


class TopState:
    """Euler-Arnold top: one matrix of angular momenta and an R-matrix family."""

    def __init__(self, S, family):
        S = np.asarray(S, dtype=complex)
        if S.shape != (family.n, family.n):
            raise DomainError(f"S must be {family.n}x{family.n} for this family")
        if not np.all(np.isfinite(S)):
            raise DomainError("S entries must be finite")
        self.S = S
        self.family = family


def top_maps(state, z):
    """(L(S,z), M(S,z), J(S), E(S)) for the top."""
    fam = state.family
    r, m = fam.classical_parts(z)
    r0, m0 = fam.constant_parts()
    nr = fam.nres
    L = contract(r, state.S, nr)
    M = contract(m, state.S, nr)
    J = contract(m0, state.S, nr)
    E = contract(r0, state.S, nr)
    return L, M, J, E


def top_J(state):
    _, m0 = state.family.constant_parts()
    return contract(m0, state.S, state.family.nres)


def top_eom(state):
    """Sdot = [S, J(S)]."""
    S = state.S
    J = top_J(state)
    return S @ J - J @ S


def top_lax_residual(state, z):
    """|| L(Sdot, z) - [L(S,z), M(S,z)] || on the equations of motion."""
    fam = state.family
    L, M, _, _ = top_maps(state, z)
    sdot = top_eom(state)
    lhs = contract(fam.classical_parts(z)[0], sdot, fam.nres)
    rhs = L @ M - M @ L
    return float(np.max(np.abs(lhs - rhs)))


class GaudinState:
    """Collection of residues S^a at pairwise distinct marked points z_a."""

    def __init__(self, sites, family):
        n = family.n
        pts = [complex(z) for z, _ in sites]
        for i, zi in enumerate(pts):
            for zj in pts[i + 1 :]:
                if abs(zi - zj) < 1e-12:
                    raise DomainError("marked points must be pairwise distinct")
        mats = []
        for _, S in sites:
            S = np.asarray(S, dtype=complex)
            if S.shape != (n, n) or not np.all(np.isfinite(S)):
                raise DomainError(f"site matrices must be finite {n}x{n}")
            mats.append(S)
        self.points = pts
        self.mats = mats
        self.family = family

    @property
    def nsites(self):
        return len(self.points)

    def replace(self, mats):
        return GaudinState(list(zip(self.points, mats)), self.family)


def _I(state, a, b, S):
    """I^{ab}(S) = (1/nres) tr_2(r_12(z_a - z_b) S_2)."""
    r, _ = state.family.classical_parts(state.points[a] - state.points[b])
    return contract(r, S, state.family.nres)


def _J(state, a, b, S):
    """J^{ab}(S) = (1/nres) tr_2(m_12(z_a - z_b) S_2); J^{aa} uses m(0)."""
    if a == b:
        _, m0 = state.family.constant_parts()
        return contract(m0, S, state.family.nres)
    _, m = state.family.classical_parts(state.points[a] - state.points[b])
    return contract(m, S, state.family.nres)


def gaudin_L(state, z):
    """L(z) = sum_a (1/nres) tr_2(r_12(z - z_a) S^a_2)."""
    acc = np.zeros((state.family.n, state.family.n), dtype=complex)
    nr = state.family.nres
    for za, Sa in zip(state.points, state.mats):
        acc += contract(state.family.classical_parts(z - za)[0], Sa, nr)
    return acc


def gaudin_M(state, flow, z):
    """M-matrix of the given flow: flow 0 is the m-kernel sum, flow a >= 1 is
    -L(S^a, z - z_a)."""
    nr = state.family.nres
    if flow == 0:
        acc = np.zeros((state.family.n, state.family.n), dtype=complex)
        for za, Sa in zip(state.points, state.mats):
            acc += contract(state.family.classical_parts(z - za)[1], Sa, nr)
        return acc
    a = flow - 1
    return -contract(
        state.family.classical_parts(z - state.points[a])[0], state.mats[a], nr
    )


def gaudin_hamiltonians(state):
    """(list of H_a, H_0).

    H_a = (1/n) sum_{b != a} tr_12(r_12(z_a - z_b) S^a_1 S^b_2)
    H_0 = (1/2) sum_a tr(S^a J(S^a))
          + (1/2n) sum_{a != b} tr_12(m_12(z_a - z_b) S^a_1 S^b_2)
    """
    ns = state.nsites
    fam = state.family
    H = []
    for a in range(ns):
        h = 0.0 + 0.0j
        for b in range(ns):
            if b == a:
                continue
            r, _ = fam.classical_parts(state.points[a] - state.points[b])
            h += pair_trace(r, state.mats[a], state.mats[b], fam.nres)
        H.append(h)
    h0 = 0.0 + 0.0j
    for a in range(ns):
        h0 += 0.5 * np.trace(state.mats[a] @ _J(state, a, a, state.mats[a]))
        for b in range(ns):
            if b == a:
                continue
            _, m = fam.classical_parts(state.points[a] - state.points[b])
            h0 += 0.5 * pair_trace(m, state.mats[a], state.mats[b], fam.nres)
    return H, h0


def gaudin_eom(state, flow):
    """Right-hand sides Sdot^b of the flow (0 = the m-kernel Hamiltonian).

    Flow directions are normalized so that every flow satisfies the Lax form
    d/dt L(z) = [L(z), M^flow(z)] with the M-matrices of gaudin_M.  For the
    marked-point flows this orientation is
    Sdot^b = [I^{ba}(S^a), S^b] (b != a), Sdot^a = sum_c [S^a, I^{ac}(S^c)];
    the opposite orientation is Lax-consistent only with M^a = +L(S^a, .).
    """
    ns = state.nsites
    out = []
    if flow == 0:
        for a in range(ns):
            Sa = state.mats[a]
            K = _J(state, a, a, Sa)
            for b in range(ns):
                if b != a:
                    K = K + _J(state, a, b, state.mats[b])
            out.append(Sa @ K - K @ Sa)
        return out
    a = flow - 1
    for b in range(ns):
        Sb = state.mats[b]
        if b != a:
            I = _I(state, b, a, state.mats[a])
            out.append(I @ Sb - Sb @ I)
        else:
            acc = np.zeros_like(Sb)
            for c in range(ns):
                if c == a:
                    continue
                I = _I(state, a, c, state.mats[c])
                acc += Sb @ I - I @ Sb
            out.append(acc)
    return out


def gaudin_lax_residual(state, flow, z):
    """|| L(Sdot, z) - [L(z), M^flow(z)] || on the flow equations."""
    sdot = gaudin_eom(state, flow)
    lhs = gaudin_L(state.replace(sdot), z)
    L = gaudin_L(state, z)
    M = gaudin_M(state, flow, z)
    return float(np.max(np.abs(lhs - (L @ M - M @ L))))


def _dz_M(state, flow, z):
    """Analytic d/dz of the flow's M-matrix via the dr/dm kernels."""
    nr = state.family.nres
    if flow == 0:
        acc = np.zeros((state.family.n, state.family.n), dtype=complex)
        for za, Sa in zip(state.points, state.mats):
            acc += contract(state.family.dm(z - za), Sa, nr)
        return acc
    a = flow - 1
    return -contract(state.family.dr(z - state.points[a]), state.mats[a], nr)


def schlesinger_residual(state, flow, z, step=1e-5):
    """Zero-curvature residual of the non-autonomous (Schlesinger) flows.

    flow a >= 1: d_{z_a} L - d_z M^a - [L, M^a], where d_{z_a} combines the
    dynamical part (the Gaudin flow of the S^b) with the explicit dependence
    of L on the marked point, taken by central finite differences.
    flow 0: 2*pi*i d_tau L - d_z M^0 - [L, M^0] (elliptic family only); the
    explicit tau-derivative differentiates the family modulus.
    """
    fam = state.family
    L = gaudin_L(state, z)
    M = gaudin_M(state, flow, z)
    dyn = gaudin_L(state.replace(gaudin_eom(state, flow)), z)
    if flow == 0:
        if fam.kind != "elliptic":
            raise DomainError("the tau-flow requires the elliptic family")

        def L_at_tau(tau):
            f2 = RFamily.elliptic(fam.n, tau)
            return GaudinState(list(zip(state.points, state.mats)), f2)

        expl = (
            gaudin_L(L_at_tau(fam.tau + step), z)
            - gaudin_L(L_at_tau(fam.tau - step), z)
        ) / (2 * step)
        # the flow right-hand side already carries the 2*pi*i of the printed
        # non-autonomous equation, only the explicit modulus derivative needs it
        lhs = dyn + 2j * np.pi * expl
    else:
        a = flow - 1

        def L_at(za):
            pts = list(state.points)
            pts[a] = za
            shifted = GaudinState(list(zip(pts, state.mats)), fam)
            return gaudin_L(shifted, z)

        expl = (L_at(state.points[a] + step) - L_at(state.points[a] - step)) / (
            2 * step
        )
        lhs = dyn + expl
    rhs = _dz_M(state, flow, z) + (L @ M - M @ L)
    return float(np.max(np.abs(lhs - rhs)))


def rstructure_residual(state, z, w):
    """Residual of the linear r-matrix structure of the Lax matrix.

    The bracket {U_1(z), U_2(w)} is assembled by brute-force summation of the
    linear Poisson brackets of the S^a entries, and compared with
    [U_1(z), r_12(z-w)] - [U_2(w), r_21(w-z)].
    """
    fam = state.family
    n = fam.n
    nr = fam.nres
    bracket = np.zeros((n, n, n, n), dtype=complex)
    for za, Sa in zip(state.points, state.mats):
        A4 = fam.classical_parts(z - za)[0].mat.reshape(n, n, n, n) / nr
        B4 = fam.classical_parts(w - za)[0].mat.reshape(n, n, n, n) / nr
        # {S_lk, S_tm} = -S_lm d_tk + S_tk d_lm
        bracket -= np.einsum("pkql,rmsk,lm->pqrs", A4, B4, Sa)
        bracket += np.einsum("pkql,rlst,tk->pqrs", A4, B4, Sa)
    lhs = TensorOp(n, 2, bracket.transpose(0, 2, 1, 3).reshape(n * n, n * n))
    U1 = leg_embed(TensorOp(n, 1, gaudin_L(state, z)), [1], 2)
    U2 = leg_embed(TensorOp(n, 1, gaudin_L(state, w)), [2], 2)
    # with the 1/nres-normalized Lax matrix the structure kernel is r/nres
    r12 = (1.0 / nr) * fam.classical_parts(z - w)[0]
    r21 = (1.0 / nr) * fam.classical_parts(w - z)[0].swap()
    rhs = U1.commutator(r12) - U2.commutator(r21)
    return (lhs - rhs).norm()
