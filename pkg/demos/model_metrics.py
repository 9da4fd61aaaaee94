"""Cone and cusp densities: curvature check and the distance dichotomy."""

import math

import numpy as np

from hypsing.metric import Conical, Cusp, annular_points, curvature_fd, density_field, radial_distance, radial_distance_log

# %% curvature of the model densities on an annulus
pts = annular_points(0.06, 0.8, 20, 20)
for kind in [Conical(1 / 3), Conical(1 / 2), Conical(2), Conical(5 / 2), Cusp()]:
    field = density_field(kind)
    k = np.array([curvature_fd(field, z) for z in pts])
    print(f"{kind!r:28s} max |K + 1| = {np.max(np.abs(k + 1)):.2e}")

# %% a cone point sits at finite distance, a cusp infinitely far away
print("\ndistance from r to 0.5")
for r in [1e-2, 1e-4, 1e-8, 0.0]:
    cone = radial_distance(Conical(0.5), r, 0.5)
    cusp = radial_distance(Cusp(), r, 0.5) if r > 0 else math.inf
    print(f"r = {r:7.0e}   cone {cone:8.4f}   cusp {cusp:8.4f}")

# the cusp distance grows like ln ln(1/r); pass log-radii for radii below double range
for k in [10, 1000, 10**9]:
    print(f"d(e^-{k}, e^-1) = {radial_distance_log(Cusp(), -k, -1):.6f}  ln k = {math.log(k):.6f}")
