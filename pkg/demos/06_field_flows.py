"""1+1 dimensional field flows and zero-curvature residuals.

Promoting the Gaudin residues to periodic fields S^a(x) gives a U-matrix
with marked-point poles; each flow supplies a V-matrix, and the pair must
satisfy the zero-curvature (Zakharov-Shabat) equation.  The script builds
band-limited minimal-orbit fields and measures the residual for the
single-site (Landau-Lifshitz type), two-site (principal chiral type), and
three-site field models, on first and second flows.
"""

import numpy as np

from aybelab import models_2d as m2
from aybelab.rmat import RFamily

TAU = 0.21 + 0.93j
POINTS = [0.11 + 0.03j, 0.52 - 0.07j, -0.29 + 0.21j]
Z_PROBES = [0.41 - 0.18j, 0.83 + 0.12j, -0.37 + 0.29j]


def make_state(fam, nsites, m=32, band=2, k=0.7):
    sites = [
        (za, m2.random_minimal_field(fam.n, m, c=1.0, band=band, seed=5 + a))
        for a, za in enumerate(POINTS[:nsites])
    ]
    return m2.FieldState(sites, k, fam, orbit_c=1.0)


for fam in (RFamily.elliptic(2, TAU), RFamily.trig7v(0.3), RFamily.yang(2)):
    print(f"{fam.kind}-n{fam.n}")
    for nsites, label in ((1, "single site"), (2, "two sites"), (3, "three sites")):
        st = make_state(fam, nsites)
        first = max(m2.zs_residual(st, ("first", 0), Z_PROBES))
        second = max(m2.zs_residual(st, ("second", 0), Z_PROBES))
        print(f"  {label:>11}: first flow {first:.2e}, second flow {second:.2e}")
    print()

# minimal orbits: rank-one fields with S^2 = c S; the one-site second flow
# also has a simplified closed form
fam = RFamily.elliptic(2, TAU)
st = make_state(fam, 1)
res = max(m2.zs_residual(st, ("second", 0), Z_PROBES, simplified=True))
print(f"one-site second flow, simplified minimal-orbit form: {res:.2e}")
