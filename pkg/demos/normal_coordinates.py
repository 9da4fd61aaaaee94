"""Normal coordinates for developing germs, and their rotation ambiguity."""

from fractions import Fraction

import numpy as np

from hypsing.germ import DevelopingGerm, Log, Power
from hypsing.mobius import MobiusMap, Model, compose
from hypsing.normalform import classify_singularity, normal_coordinate, rotation_class, verify_normal_form
from hypsing.series import TruncSeries

# a polynomial change of variable, padded so the series is exact through order 24
inner = TruncSeries(np.r_[0, 1, 0.2 - 0.1j, 0.05j, np.zeros(21)])
germs = {
    "cone 5/3 in the disk": DevelopingGerm(MobiusMap(1.2, 0.3 + 0.4j, 0.3 - 0.4j, 1.2), Power(Fraction(5, 3)), Model.DISK, inner),
    "integer cone 3": DevelopingGerm(MobiusMap(1, 0.2, 0.5j, 2), Power(3), Model.DISK),
    "cusp in the half-plane": DevelopingGerm(MobiusMap(-2j, 0.7, 0, 1), Log(), Model.HALFPLANE, inner),
}

# %% normalize and verify
for name, germ in germs.items():
    nf = normal_coordinate(germ, 24)
    res = verify_normal_form(nf, germ)
    print(f"{name:24s} {classify_singularity(germ)!r:20s} residual {res:.1e}")
    print("    z(xi) =", np.round(nf.coord.coeffs[:4], 5))

# %% changing the developing map by an isometry only rotates the coordinate
germ = germs["cusp in the half-plane"]
other = DevelopingGerm(compose(MobiusMap(2, 1, 0, 0.5), germ.moebius), germ.branch, germ.model, germ.inner)
lam = rotation_class(normal_coordinate(germ).coord, normal_coordinate(other).coord)
print(f"\nrotation between the two normalizations: {lam:.6f}  (|lambda| = {abs(lam):.15f})")
