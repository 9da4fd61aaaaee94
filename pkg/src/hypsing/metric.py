"""Conformal hyperbolic metrics near a puncture.

Densities are conformal factors ``rho`` of ``rho |dz|**2``.  The two local
models are the cone of angle ``2 pi alpha``,

    rho = 4 alpha**2 |z|**(2 alpha - 2) / (1 - |z|**(2 alpha))**2,

and the cusp, ``rho = 1 / (|z| ln|z|)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .germ import DevelopingGerm, in_model
from .mobius import Model
from .series import PRINCIPAL, BranchSpec


class OutOfDomain(ValueError):
    pass


class ImageOutsideModel(ValueError):
    """The germ leaves the model near the sample point, so it is not a developing map there."""


class StencilOutOfDomain(ValueError):
    pass


@dataclass(frozen=True)
class Conical:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("cone parameter must be positive")


@dataclass(frozen=True)
class Cusp:
    pass


def conical_density(alpha: float, z: complex) -> float:
    r = abs(z)
    alpha = float(alpha)
    if r >= 1:
        raise OutOfDomain(f"|z| = {r} >= 1")
    if r == 0:
        if alpha == 1:
            return 4.0
        if alpha > 1:
            return 0.0
        raise OutOfDomain("density is infinite at the cone point for alpha < 1")
    r2a = r ** (2 * alpha)
    return 4 * alpha**2 * r ** (2 * alpha - 2) / (1 - r2a) ** 2


def cusp_density(z: complex) -> float:
    r = abs(z)
    if not 0 < r < 1:
        raise OutOfDomain(f"cusp density needs 0 < |z| < 1, got {r}")
    return 1.0 / (r * math.log(r)) ** 2


def model_density(kind: Conical | Cusp, z: complex) -> float:
    if isinstance(kind, Cusp):
        return cusp_density(z)
    return conical_density(kind.alpha, z)


def disk_density(w: complex) -> float:
    return 4.0 / (1 - abs(w) ** 2) ** 2


def halfplane_density(w: complex) -> float:
    return 1.0 / w.imag**2


def pullback_density(germ: DevelopingGerm, z: complex, model: Model | None = None, branch: BranchSpec = PRINCIPAL) -> float:
    """``|F'(z)|**2 rho_0(F(z))`` for the model metric ``rho_0`` (the germ's model by default)."""
    model = germ.model if model is None else model
    w = germ(z, branch)
    if not in_model(w, model):
        raise ImageOutsideModel(f"F({z}) = {w} is outside the {model.value} model")
    dw = germ.derivative(z, branch)
    rho0 = disk_density(w) if model is Model.DISK else halfplane_density(w)
    return abs(dw) ** 2 * rho0


# 1-D second-derivative weights on offsets (-2, -1, 0, 1, 2).
_STENCILS = {
    2: np.array([0.0, 1.0, -2.0, 1.0, 0.0]),
    4: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
}


def curvature_fd(density: Callable[[complex], float], z: complex, h: float = 1e-3, order: int = 4, max_halvings: int = 4) -> float:
    """Gaussian curvature ``-Laplacian(u) / rho`` with ``u = ln(rho)/2`` by central differences.

    ``order`` selects the 5-point (2) or the 9-point cross (4) Laplacian.
    If the stencil leaves the density's domain the step is halved, at most
    ``max_halvings`` times, before :class:`StencilOutOfDomain` is raised.
    """
    weights = _STENCILS[order]
    offsets = np.arange(-2, 3)
    for _ in range(max_halvings + 1):
        try:
            rho_c = density(z)
            lap = 0.0
            for direction in (1.0, 1j):
                for w, k in zip(weights, offsets):
                    if w:
                        lap += w * 0.5 * math.log(density(z + k * h * direction))
            lap /= h * h
            if not (rho_c > 0 and math.isfinite(lap)):
                raise OutOfDomain("non-positive or non-finite density")
            return -lap / rho_c
        except (OutOfDomain, ImageOutsideModel, ValueError, ZeroDivisionError):
            h /= 2
    raise StencilOutOfDomain(f"no admissible stencil around {z}")


def radial_distance(kind: Conical | Cusp, r1: float, r2: float) -> float:
    """Length of the radial segment ``r1 <= |z| <= r2`` in the model metric."""
    if isinstance(kind, Cusp):
        if not 0 < r1 < r2 < 1:
            raise OutOfDomain("cusp distance needs 0 < r1 < r2 < 1")
        return math.log(-math.log(r1)) - math.log(-math.log(r2))
    if not 0 <= r1 < r2 < 1:
        raise OutOfDomain("conical distance needs 0 <= r1 < r2 < 1")
    a = kind.alpha

    def prim(r):
        t = r**a
        return math.log1p(t) - math.log1p(-t)

    return prim(r2) - prim(r1)


def radial_distance_log(kind: Conical | Cusp, log_r1: float, log_r2: float) -> float:
    """:func:`radial_distance` with the radii given by their logarithms.

    Deep cusp radii such as ``e**-1000`` underflow in floating point; their
    logarithms do not.
    """
    if not log_r1 < log_r2 < 0:
        raise OutOfDomain("need log r1 < log r2 < 0")
    if isinstance(kind, Cusp):
        return math.log(-log_r1) - math.log(-log_r2)
    a = kind.alpha

    def prim(lr):
        t = math.exp(a * lr)
        return math.log1p(t) - math.log1p(-t)

    return prim(log_r2) - prim(log_r1)


@dataclass(frozen=True)
class Divisor:
    genus: int
    thetas: Sequence[float]

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        for th in self.thetas:
            if th < 0 or th == 1:
                raise ValueError(f"each theta must satisfy 0 <= theta != 1, got {th}")
        object.__setattr__(self, "thetas", tuple(self.thetas))

    def euler_sum(self) -> Fraction:
        """``chi + sum(theta_i - 1)``, exact (floats enter with their binary value)."""
        return (2 - 2 * self.genus) + sum((Fraction(t) - 1 for t in self.thetas), Fraction(0))


def gauss_bonnet_admissible(divisor: Divisor) -> bool:
    return divisor.euler_sum() < 0


def density_field(kind: Conical | Cusp) -> Callable[[complex], float]:
    return lambda z: model_density(kind, z)


def sample_grid(kind: Conical | Cusp, points: Sequence[complex], h: float = 1e-3) -> list[tuple[float, float, float, float]]:
    """Rows ``(re, im, density, curvature)``; points outside the domain give NaNs."""
    field = density_field(kind)
    rows = []
    for z in points:
        z = complex(z)
        try:
            rho = field(z)
            k = curvature_fd(field, z, h)
        except (OutOfDomain, StencilOutOfDomain):
            rho = k = math.nan
        rows.append((z.real, z.imag, rho, k))
    return rows


def annular_points(r_min: float, r_max: float, n_r: int, n_phi: int) -> list[complex]:
    """Row-major polar grid: radii outer loop, phases inner loop."""
    radii = np.linspace(r_min, r_max, n_r)
    phases = 2 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
    return [r * np.exp(1j * p) for r in radii for p in phases]


def cartesian_points(re: tuple[float, float], im: tuple[float, float], n_re: int, n_im: int) -> list[complex]:
    """Row-major rectangular grid: imaginary part outer loop, real part inner loop."""
    xs = np.linspace(re[0], re[1], n_re)
    ys = np.linspace(im[0], im[1], n_im)
    return [complex(x, y) for y in ys for x in xs]
