"""Dense complex tensor-leg algebra over Mat(N,C)^{(x)k}.

A TensorOp stores a dense n^k x n^k matrix with the multi-index convention
that leg 1 is the most significant index block (plain numpy kron order).
Values are treated as immutable; every operation allocates a fresh result.
"""

import numpy as np


class TensorOp:
    """Dense operator on (C^n)^{(x)legs}."""

    __slots__ = ("n", "legs", "mat")

    def __init__(self, n, legs, mat):
        mat = np.asarray(mat, dtype=complex)
        dim = n**legs
        if mat.shape != (dim, dim):
            raise ValueError(f"expected shape {(dim, dim)}, got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("TensorOp entries must be finite")
        self.n = n
        self.legs = legs
        self.mat = mat

    # -- arithmetic -------------------------------------------------------
    def _like(self, mat):
        return TensorOp(self.n, self.legs, mat)

    def __add__(self, other):
        return self._like(self.mat + other.mat)

    def __sub__(self, other):
        return self._like(self.mat - other.mat)

    def __neg__(self):
        return self._like(-self.mat)

    def __mul__(self, c):
        return self._like(self.mat * c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return self._like(self.mat @ other.mat)

    def commutator(self, other):
        return self._like(self.mat @ other.mat - other.mat @ self.mat)

    def norm(self):
        """Max-absolute-entry norm, used for all residuals."""
        return float(np.max(np.abs(self.mat)))

    def permute_legs(self, perm):
        """Reorder legs; perm[s] is the (1-based) old leg placed at slot s+1."""
        k = self.legs
        n = self.n
        axes = [p - 1 for p in perm]
        t = self.mat.reshape((n,) * (2 * k))
        t = t.transpose(axes + [k + a for a in axes])
        return TensorOp(n, k, t.reshape(n**k, n**k))

    def swap(self):
        """Exchange the two legs of a 2-leg operator."""
        if self.legs != 2:
            raise ValueError("swap is defined for 2-leg operators")
        return self.permute_legs((2, 1))

    def copy(self):
        return self._like(self.mat.copy())


def identity_op(n, legs=1):
    return TensorOp(n, legs, np.eye(n**legs, dtype=complex))


def from_factors(*mats):
    """Tensor product of single-leg matrices, leg 1 first."""
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=complex))
    n = np.asarray(mats[0]).shape[0]
    return TensorOp(n, len(mats), out)


def matrix_unit(n, i, j):
    """E_ij with 0-based indices."""
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


def belavin_Q(n):
    """The clock and shift matrices (Q1, Q2) of the finite Heisenberg pair."""
    k = np.arange(1, n + 1)
    q1 = np.diag(np.exp(2j * np.pi * k / n))
    q2 = np.zeros((n, n), dtype=complex)
    for kk in range(1, n + 1):
        ll = kk % n + 1
        q2[kk - 1, ll - 1] = 1.0
    return q1, q2


def belavin_T(n, a1, a2):
    """Basis matrix T_{a1 a2} = exp(pi*i*a1*a2/n) Q1^a1 Q2^a2.

    Indices are signed integers and are NOT reduced mod n before building the
    phase: T_{a1+n, a2} differs from T_{a1, a2} by a root-of-unity phase, and
    keeping the formal definition is what makes T_{-a} pair correctly with
    T_a inside R-matrix sums.  T_{(0,0)} is the identity and
    tr(T_a T_b) = n * (phase) exactly when a + b = 0 mod n, else 0.
    """
    q1, q2 = belavin_Q(n)
    phase = np.exp(1j * np.pi * a1 * a2 / n)
    return phase * np.linalg.matrix_power(q1, a1) @ np.linalg.matrix_power(q2, a2)


def permutation_P(n):
    """P12 = sum_ij E_ij (x) E_ji, the operator swapping the two legs."""
    dim = n * n
    p = np.zeros((dim, dim), dtype=complex)
    for i in range(n):
        for j in range(n):
            p[i * n + j, j * n + i] = 1.0
    return TensorOp(n, 2, p)


def leg_embed(op, positions, total):
    """Embed op into `total` legs, acting on the listed (1-based) legs.

    The order of `positions` carries the component permutation: embedding a
    2-leg operator at [2, 1] transposes its legs while embedding.
    """
    k = op.legs
    n = op.n
    if len(positions) != k:
        raise ValueError("positions must name one slot per leg of op")
    if len(set(positions)) != k or any(p < 1 or p > total for p in positions):
        raise ValueError(f"positions must be distinct and within 1..{total}")
    rest = [p for p in range(1, total + 1) if p not in positions]
    big = np.kron(op.mat, np.eye(n ** (total - k), dtype=complex))
    order = list(positions) + rest  # current leg order of `big`
    perm = [order.index(s) + 1 for s in range(1, total + 1)]
    return TensorOp(n, total, big).permute_legs(perm)


def partial_trace(op, legs):
    """Contract the named (1-based) legs; the result keeps the others in order."""
    k = op.legs
    n = op.n
    legs = sorted(set(legs))
    if any(l < 1 or l > k for l in legs):
        raise ValueError(f"legs must be within 1..{k}")
    t = op.mat.reshape((n,) * (2 * k))
    # einsum labels: row axes 0..k-1, col axes k..2k-1
    labels = list(range(2 * k))
    for l in legs:
        labels[k + l - 1] = labels[l - 1]
    keep = [l for l in range(1, k + 1) if l not in legs]
    out_labels = [labels[l - 1] for l in keep] + [labels[k + l - 1] for l in keep]
    t = np.einsum(t, labels, out_labels)
    kk = len(keep)
    if kk == 0:
        return complex(t)
    return TensorOp(n, kk, t.reshape(n**kk, n**kk))
