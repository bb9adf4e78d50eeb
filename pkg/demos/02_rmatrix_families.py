"""A tour of the R-matrix families.

The package ships five families of quantum R-matrices: the elliptic family
for any matrix size n, its trigonometric 7-vertex and rational 11-vertex
degenerations (n = 2), and Yang's rational R-matrix.  All satisfy
skew-symmetry and unitarity: the product R12(hbar, z) R21(hbar, -z) is a
scalar multiple of the identity, and the scalar is detected automatically.
"""

import numpy as np

from aybelab import rmat
from aybelab.rmat import RFamily

TAU = 0.21 + 0.93j

families = [
    RFamily.elliptic(2, TAU),
    RFamily.elliptic(3, TAU),
    RFamily.trig7v(0.3),
    RFamily.rat11v(),
    RFamily.yang(2),
]

hb, z = 0.31 + 0.05j, 0.44 - 0.12j
print(f"evaluation point: hbar = {hb}, z = {z}")
print()

for fam in families:
    R = fam.eval_R(hb, z)
    skew = (R + fam.eval_R(-hb, -z).swap()).norm()
    F, udev = rmat.unitarity_scalar(fam, hb, z)
    best, dev = rmat.detect_unitarity_normalization(fam, samples=8)
    print(f"{fam.kind}-n{fam.n}:")
    print(f"  |R| = {R.norm():.6g}, skew-symmetry residual {skew:.2e}")
    print(f"  unitarity scalar F = {F:.6g} (off-identity residual {udev:.2e})")
    print(f"  detected normalization: {best} (dev {dev:.2e})")
    print()
