"""Schwarzian derivatives and the second-order operator attached to them.

Near a puncture a compatible projective function has

    {F, x} = (1 - theta**2) / (2 x**2) + d / x + phi(x)

and ``F`` is a ratio of solutions of ``x**2 u'' + q(x) u = 0`` with
``q = ((1 - theta**2)/2 + d x + x**2 phi(x)) / 2``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .germ import DevelopingGerm, Log
from .mobius import MobiusMap
from .series import DEFAULT_ORDER, BranchSpec, TruncSeries, derive

INTEGER_SNAP = 1e-9


class NotLocallyUnivalent(ValueError):
    pass


class InconsistentOperator(ValueError):
    pass


class IntegerSnapWarning(UserWarning):
    """A floating theta was within tolerance of an integer and was snapped to it."""


def exact_theta(theta) -> Fraction:
    """Turn theta into an exact rational; near-integer floats are snapped with a warning."""
    if isinstance(theta, str):
        return Fraction(theta)
    if isinstance(theta, (int, Fraction)):
        return Fraction(theta)
    theta = float(theta)
    k = round(theta)
    if theta != k and abs(theta - k) < INTEGER_SNAP:
        warnings.warn(f"theta={theta!r} treated as the integer {k}", IntegerSnapWarning, stacklevel=3)
        return Fraction(k)
    return Fraction(theta)


@dataclass(frozen=True)
class SingularityData:
    """Schwarzian data ``(theta, d, phi)`` at one puncture; theta = 0 is a cusp."""

    theta: Fraction | float
    d: complex = 0j
    phi: TruncSeries | None = None

    def __post_init__(self):
        th = self.theta
        if isinstance(th, str):
            th = Fraction(th)
            object.__setattr__(self, "theta", th)
        if th < 0 or th == 1:
            raise ValueError(f"theta must satisfy 0 <= theta != 1, got {th}")
        object.__setattr__(self, "d", complex(self.d))
        phi = self.phi
        if phi is None:
            phi = TruncSeries([0.0])
        elif not isinstance(phi, TruncSeries):
            phi = TruncSeries(phi)
        if phi.shift != 0:
            raise ValueError("phi must have zero shift")
        object.__setattr__(self, "phi", phi)

    @property
    def is_cusp(self) -> bool:
        return self.theta == 0

    def principal(self) -> complex:
        """Coefficient ``(1 - theta**2)/2`` of ``x**-2``."""
        return (1 - float(self.theta) ** 2) / 2


@dataclass(frozen=True)
class OperatorCoeffs:
    """Coefficients ``b_0..b_N`` of ``q`` in ``L = x**2 d^2/dx^2 + q(x)``.

    ``theta`` is the exponent difference ``sqrt(1 - 4 b_0)``.  When supplied
    it is authoritative (exact) and ``b_0`` must agree with it.
    """

    q: TruncSeries
    theta: Fraction | None = None

    def __post_init__(self):
        if self.q.shift != 0:
            raise InconsistentOperator("q must have zero shift")
        b0 = complex(self.q.coeffs[0])
        if self.theta is None:
            disc = 1 - 4 * b0
            if abs(disc.imag) > 1e-12 or disc.real < -1e-12:
                raise InconsistentOperator(f"b0={b0} gives a non-real exponent difference")
            th = exact_theta(math.sqrt(max(disc.real, 0.0)))
            object.__setattr__(self, "theta", th)
        else:
            th = exact_theta(self.theta)
            object.__setattr__(self, "theta", th)
            expect = (1 - float(th) ** 2) / 4
            if abs(b0 - expect) > 1e-12 * max(1.0, abs(expect)):
                raise InconsistentOperator(f"b0={b0} does not match theta={th} (expected {expect})")
            if th < 0:
                raise InconsistentOperator("theta must be nonnegative")

    @property
    def order(self) -> int:
        return self.q.order

    @property
    def b(self) -> np.ndarray:
        return self.q.coeffs

    @property
    def b0_exact(self) -> Fraction:
        return (1 - self.theta**2) / 4


def ode_from_schwarzian(data: SingularityData, order: int = DEFAULT_ORDER) -> OperatorCoeffs:
    """``q = ((1 - theta**2)/2 + d x + x**2 phi(x)) / 2``; phi is zero-padded as an exact polynomial."""
    b = np.zeros(order + 1, dtype=complex)
    b0 = (1 - Fraction(data.theta) ** 2) / 4
    b[0] = float(b0)
    if order >= 1:
        b[1] = data.d / 2
    phi = data.phi.coeffs[: max(order - 1, 0)]
    b[2 : 2 + phi.size] = phi / 2
    return OperatorCoeffs(TruncSeries(b), Fraction(data.theta))


def schwarzian_of_series(f: TruncSeries) -> TruncSeries:
    """``{f, x} = f'''/f' - 3/2 (f''/f')**2`` to order ``N - 3``."""
    if f.shift != 0:
        raise NotLocallyUnivalent("need a zero-shift series")
    if f.order < 3:
        raise ValueError("need order >= 3")
    f1 = derive(f)
    if abs(f1.coeffs[0]) < 1e-300:
        raise NotLocallyUnivalent("f'(0) = 0")
    f2 = derive(f1)
    f3 = derive(f2)
    r = f2 / f1
    return f3 / f1 - r * r * 1.5


def apply_series(m: MobiusMap, f: TruncSeries) -> TruncSeries:
    """Series of ``(a f + b)/(c f + d)``."""
    return (f * m.a + m.b) / (f * m.c + m.d)


@dataclass(frozen=True)
class SchwarzianExpansion:
    theta: float | Fraction
    d: complex
    tail: TruncSeries

    def as_data(self) -> SingularityData:
        return SingularityData(self.theta, self.d, self.tail)


def _branch_principal(germ: DevelopingGerm) -> tuple:
    if isinstance(germ.branch, Log):
        return 0.5, Fraction(0)
    alpha = germ.branch.alpha
    return (1 - float(alpha) ** 2) / 2, alpha


def schwarzian_of_germ(germ: DevelopingGerm, order: int = DEFAULT_ORDER) -> SchwarzianExpansion:
    """Laurent data of ``{F, x}`` for a germ, computed in series arithmetic.

    Post-composition by the Mobius factor leaves the Schwarzian unchanged,
    so only the branch and the inner coordinate contribute.
    """
    c0, theta = _branch_principal(germ)
    w = germ.inner if germ.inner is not None else TruncSeries.variable(order)
    if w.order > order:
        w = w.truncate(order)
    unit = TruncSeries(w.coeffs[1:])
    w1 = derive(w)
    ratio = w1 / unit
    h = ratio * ratio * c0
    if w.order >= 4:
        sw = schwarzian_of_series(w).shifted(2).with_shift(0)
        h = h + sw
    d = complex(h.coeffs[1]) if h.order >= 1 else 0j
    tail = TruncSeries(h.coeffs[2:]) if h.order >= 2 else TruncSeries([0.0])
    return SchwarzianExpansion(theta, d, tail)


def schwarzian_numeric(germ: DevelopingGerm, radius: float = 0.05, points: int = 64, step_ratio: float = 1e-3) -> SchwarzianExpansion:
    """Finite-difference estimate of the Laurent data of ``{F, x}``.

    ``F'`` is evaluated in closed form; ``F''`` and ``F'''`` come from
    five-term (fourth-order) central differences of ``F'`` with step ``step_ratio*radius``.
    The function ``x**2 {F, x}`` is sampled on ``|x| = radius`` and projected
    onto Taylor coefficients with an FFT.  The error of the k-th returned
    coefficient grows roughly like ``radius**-k``.
    """
    h = step_ratio * radius
    xs = radius * np.exp(2j * np.pi * np.arange(points) / points)
    vals = np.empty(points, dtype=complex)
    for j, x in enumerate(xs):
        xi = germ.coordinate(x)
        branch = BranchSpec(cut=cmath.phase(xi) + math.pi)
        fp = lambda z: germ.derivative(z, branch)
        f1 = fp(x)
        p1, m1, p2, m2 = fp(x + h), fp(x - h), fp(x + 2 * h), fp(x - 2 * h)
        f2 = (8 * (p1 - m1) - (p2 - m2)) / (12 * h)
        f3 = (16 * (p1 + m1) - (p2 + m2) - 30 * f1) / (12 * h * h)
        vals[j] = x**2 * (f3 / f1 - 1.5 * (f2 / f1) ** 2)
    coeffs = np.fft.fft(vals) / points / radius ** np.arange(points)
    kept = coeffs[: points // 2]
    c0 = kept[0].real
    theta = math.sqrt(max(1 - 2 * c0, 0.0))
    return SchwarzianExpansion(theta, complex(kept[1]), TruncSeries(kept[2:]))


def verify_compatibility(germ: DevelopingGerm, data: SingularityData, order: int = DEFAULT_ORDER, radius: float = 1.0) -> float:
    """Max coefficient mismatch between the germ's Schwarzian and the data.

    The principal part is compared through ``(1 - theta**2)/2`` and ``d``;
    the tails are compared coefficientwise with the data's phi zero-padded.
    Tail coefficient ``k`` is weighted by ``radius**k``, which turns the check
    into a bound on the difference of the two tails on ``|x| = radius``; this
    matters when the germ's series has a small radius of convergence.
    """
    s = schwarzian_of_germ(germ, order)
    germ_c0 = (1 - float(s.theta) ** 2) / 2
    res = max(abs(germ_c0 - data.principal()), abs(s.d - data.d))
    n = s.tail.coeffs.size
    phi = np.zeros(n, dtype=complex)
    m = min(n, data.phi.coeffs.size)
    phi[:m] = data.phi.coeffs[:m]
    if n:
        weights = radius ** np.arange(n)
        res = max(res, float(np.max(np.abs(s.tail.coeffs - phi) * weights)))
    return float(res)
