"""Associative, quantum, and classical Yang-Baxter equations.

Each family solves three exchange relations at once: the associative
equation (a bilinear identity mixing two Planck constants), the quantum
equation (a trilinear identity at a single Planck constant), and the
classical equation for the first expansion coefficient r(z).  This script
sweeps all three over seeded random points.
"""

import numpy as np

from aybelab import identities as idn
from aybelab.rmat import RFamily

TAU = 0.21 + 0.93j

families = [
    RFamily.elliptic(2, TAU),
    RFamily.elliptic(3, TAU),
    RFamily.trig7v(0.3),
    RFamily.rat11v(),
    RFamily.yang(3),
]

rng = np.random.default_rng(1)
print(f"{'family':>14} {'AYBE':>10} {'QYBE':>10} {'CYBE':>10}")
for fam in families:
    worst = {"AYBE": 0.0, "QYBE": 0.0, "CYBE": 0.0}
    for _ in range(25):
        hb, eta, z1, z2, z3 = idn._sample_points(fam, rng, 5)
        p = {"hbar": hb, "eta": eta, "z1": z1, "z2": z2, "z3": z3}
        for kind in worst:
            worst[kind] = max(worst[kind], idn.check_yb(kind, fam, p))
    print(
        f"{fam.kind + '-n' + str(fam.n):>14} "
        f"{worst['AYBE']:>10.2e} {worst['QYBE']:>10.2e} {worst['CYBE']:>10.2e}"
    )
