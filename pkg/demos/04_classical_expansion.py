"""The classical expansion of an R-matrix.

Expanding R in the Planck constant gives 1/hbar plus the classical
r-matrix r(z) plus hbar times a second kernel m(z).  For the elliptic
family both kernels have closed forms; a Richardson limit-extraction
oracle recovers them directly from R, and a residue quadrature confirms
that r(z) has residue nres * P12 at z = 0.
"""

import numpy as np

from aybelab import rmat
from aybelab.rmat import RFamily
from aybelab.tensor import permutation_P

TAU = 0.21 + 0.93j
fam = RFamily.elliptic(2, TAU)
z = 0.38 - 0.13j

r, m = fam.classical_parts(z)
ro, mo = fam.expansion_oracle(z)
print(f"elliptic n=2 at z = {z}")
print(f"  |r(z)| = {r.norm():.6g}, closed form vs oracle: {(r - ro).norm():.2e}")
print(f"  |m(z)| = {m.norm():.6g}, closed form vs oracle: {(m - mo).norm():.2e}")

r0, m0 = fam.constant_parts()
print(f"  constant coefficients: |r0| = {r0.norm():.6g}, |m(0)| = {m0.norm():.6g}")

res = rmat.residue_quadrature(
    lambda w: fam.classical_parts(w, z_radius=0.005)[0], 0.0, radius=0.02
)
dev = (res - fam.nres * permutation_P(2)).norm()
print(f"  residue of r at z=0 vs nres*P12: {dev:.2e}  (nres = {fam.nres})")

print()
print("parity of the kernels (r odd, m even up to leg swap)")
r2, m2 = fam.classical_parts(-z)
print(f"  r(z) + swap r(-z): {(r + r2.swap()).norm():.2e}")
print(f"  m(z) - swap m(-z): {(m - m2.swap()).norm():.2e}")
