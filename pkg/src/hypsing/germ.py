"""Local models of developing maps near a puncture.

A germ is ``F = M o B o w`` where ``M`` is a Mobius map, ``B`` is either the
power branch ``xi -> xi**alpha`` or ``xi -> log xi``, and ``w`` is an optional
coordinate change (a zero-shift series with ``w(0) = 0``, ``w'(0) != 0``).
Without ``w`` the germ is written directly in the coordinate ``xi``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .mobius import MobiusMap, Model, apply, is_inf
from .series import PRINCIPAL, BranchSpec, TruncSeries, derive, evaluate


class InvalidGerm(ValueError):
    pass


@dataclass(frozen=True)
class Power:
    alpha: float | Fraction

    def __post_init__(self):
        if not self.alpha > 0 or self.alpha == 1:
            raise InvalidGerm(f"power branch needs alpha > 0, alpha != 1, got {self.alpha}")

    @property
    def is_integer(self) -> bool:
        a = self.alpha
        if isinstance(a, Fraction):
            return a.denominator == 1
        return abs(a - round(a)) < 1e-9

    def value(self, xi: complex, log_xi: complex) -> complex:
        return cmath.exp(float(self.alpha) * log_xi)

    def derivative(self, xi: complex, log_xi: complex) -> complex:
        a = float(self.alpha)
        return a * cmath.exp((a - 1) * log_xi)


@dataclass(frozen=True)
class Log:
    def value(self, xi: complex, log_xi: complex) -> complex:
        return log_xi

    def derivative(self, xi: complex, log_xi: complex) -> complex:
        return 1 / xi


@dataclass(frozen=True)
class DevelopingGerm:
    moebius: MobiusMap
    branch: Power | Log
    model: Model = Model.DISK
    inner: TruncSeries | None = None

    def __post_init__(self):
        w = self.inner
        if w is not None:
            if w.shift != 0 or abs(w.coeffs[0]) > 1e-14 or w.order < 1 or abs(w.coeffs[1]) < 1e-300:
                raise InvalidGerm("inner coordinate must be a zero-shift series with w(0)=0, w'(0)!=0")

    def coordinate(self, x: complex) -> complex:
        return complex(x) if self.inner is None else evaluate(self.inner, x)

    def coordinate_derivative(self, x: complex) -> complex:
        return 1.0 if self.inner is None else evaluate(derive(self.inner), x)

    def _log(self, xi: complex, branch: BranchSpec, log_xi):
        if log_xi is not None:
            return log_xi
        if xi == 0:
            raise InvalidGerm("the germ is not defined at the puncture")
        return branch.log(xi)

    def branch_value(self, x: complex, branch: BranchSpec = PRINCIPAL, log_xi=None) -> complex:
        xi = self.coordinate(x)
        return self.branch.value(xi, self._log(xi, branch, log_xi))

    def __call__(self, x: complex, branch: BranchSpec = PRINCIPAL, log_xi=None) -> complex:
        return apply(self.moebius, self.branch_value(x, branch, log_xi))

    def derivative(self, x: complex, branch: BranchSpec = PRINCIPAL, log_xi=None) -> complex:
        xi = self.coordinate(x)
        lg = self._log(xi, branch, log_xi)
        w = self.branch.value(xi, lg)
        return self.moebius.derivative(w) * self.branch.derivative(xi, lg) * self.coordinate_derivative(x)

    def center_value(self):
        """Limit of ``F`` at the puncture (infinity for a log branch unless M fixes it)."""
        if isinstance(self.branch, Power):
            return apply(self.moebius, 0)
        return apply(self.moebius, complex(math.inf, 0))


def in_model(w, model: Model, margin: float = 0.0) -> bool:
    if is_inf(w):
        return False
    if model is Model.DISK:
        return abs(w) < 1 - margin
    return w.imag > margin
